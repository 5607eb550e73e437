#include "qsc/model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qsc/errors.hpp"

namespace qsc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ValidationError("model field '" + field + "': " + what);
}

CMatrix parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of rows");
  const auto d = static_cast<Eigen::Index>(j.size());
  CMatrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string rf = field + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d)
      fail(rf, "row length " + std::to_string(row.is_array() ? row.size() : 0) + " differs from " + std::to_string(d) +
                   " (matrix must be square)");
    for (Eigen::Index c = 0; c < d; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      const std::string ef = rf + "[" + std::to_string(c) + "]";
      if (e.is_number()) {
        m(r, c) = cplx(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        fail(ef, "expected [re, im]");
      }
    }
  }
  return m;
}

std::vector<DensityMatrix> parse_states(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of matrices");
  std::vector<DensityMatrix> out;
  int dim = -1;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string sf = field + "[" + std::to_string(i) + "]";
    CMatrix m = parse_matrix(j[i], sf);
    if (dim >= 0 && m.rows() != dim)
      fail(sf, "dimension " + std::to_string(m.rows()) + " differs from " + std::to_string(dim));
    dim = static_cast<int>(m.rows());
    try {
      out.emplace_back(Operator(std::move(m)));
    } catch (const ValidationError& e) {
      fail(sf, e.what());
    }
  }
  return out;
}

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

Model parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("model parse error: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("model: top level must be an object");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
    fail("schema_version", "missing or not an integer");
  if (j["schema_version"].get<int>() != kModelSchemaVersion)
    fail("schema_version", "unsupported version " + std::to_string(j["schema_version"].get<int>()) + " (supported: " +
                               std::to_string(kModelSchemaVersion) + ")");

  if (!j.contains("q_x") || !j["q_x"].is_array()) fail("q_x", "missing or not an array");
  std::vector<double> q;
  for (std::size_t i = 0; i < j["q_x"].size(); ++i) {
    if (!j["q_x"][i].is_number()) fail("q_x[" + std::to_string(i) + "]", "not a number");
    q.push_back(j["q_x"][i].get<double>());
  }
  std::vector<std::string> alphabet;
  if (j.contains("alphabet")) {
    if (!j["alphabet"].is_array()) fail("alphabet", "not an array");
    for (const auto& a : j["alphabet"]) {
      if (!a.is_string()) fail("alphabet", "entries must be strings");
      alphabet.push_back(a.get<std::string>());
    }
    if (alphabet.size() != q.size())
      fail("alphabet", "has " + std::to_string(alphabet.size()) + " entries but q_x has " + std::to_string(q.size()));
  }
  if (!j.contains("states")) fail("states", "missing");
  auto states = parse_states(j["states"], "states");
  if (states.size() != q.size())
    fail("states", "has " + std::to_string(states.size()) + " entries but q_x has " + std::to_string(q.size()));

  double sum = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] > 0)) fail("q_x[" + std::to_string(i) + "]", "must be > 0 (full support required)");
    sum += q[i];
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    std::ostringstream os;
    os.precision(17);
    os << "sums to " << sum << ", not 1 within tolerance 1e-10";
    fail("q_x", os.str());
  }

  std::optional<std::vector<DensityMatrix>> alt;
  if (j.contains("alt_states")) {
    alt = parse_states(j["alt_states"], "alt_states");
    if (alt->size() != states.size()) fail("alt_states", "length differs from states");
    if ((*alt)[0].dim() != states[0].dim()) fail("alt_states", "dimension differs from states");
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    if (!j["labels"].is_array()) fail("labels", "not an array");
    for (const auto& l : j["labels"]) labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
  }
  try {
    return Model{CQSource(std::move(alphabet), std::move(q), std::move(states)), std::move(alt), std::move(labels)};
  } catch (const DimensionError& e) {
    throw ValidationError(std::string("model: ") + e.what());
  }
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("model file '" + path + "' cannot be opened");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string model_to_json(const CQSource& src, const std::optional<std::vector<DensityMatrix>>& alt) {
  json j;
  j["schema_version"] = kModelSchemaVersion;
  j["alphabet"] = src.alphabet();
  j["q_x"] = src.q();
  json st = json::array();
  for (std::size_t x = 0; x < src.size(); ++x) st.push_back(matrix_json(src.state(x).matrix()));
  j["states"] = st;
  if (alt) {
    json a = json::array();
    for (const auto& s : *alt) a.push_back(matrix_json(s.matrix()));
    j["alt_states"] = a;
  }
  return j.dump(2);
}

}  // namespace qsc
