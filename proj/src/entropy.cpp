#include "qsc/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qsc/errors.hpp"

namespace qsc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_psd(const Spectrum& s, const char* what) {
  if (s.dim() && s.values.minCoeff() < -tol::eig_clip)
    throw DomainError(std::string(what) + " must be positive semidefinite");
}

}  // namespace

EntropyValue EntropyValue::from_nats(double v) {
  EntropyValue e;
  e.nats = v;
  e.bits = std::isinf(v) ? v : v / kLn2;
  return e;
}

bool EntropyValue::is_infinite() const { return std::isinf(nats); }

double spectral_entropy(const RVector& ev) {
  double s = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] > tol::support) s -= ev[i] * std::log(ev[i]);
  return s;
}

EntropyValue von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  return EntropyValue::from_nats(std::max(0.0, spectral_entropy(es.eigenvalues())));
}

EntropyValue relative_entropy(const DensityMatrix& rho, const Operator& sigma) {
  return relative_entropy(rho.op(), sigma);
}

EntropyValue relative_entropy(const Operator& rho, const Operator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("relative_entropy: dimension mismatch");
  const Spectrum r = eig_hermitian(rho);
  const Spectrum s = eig_hermitian(sigma);
  require_psd(r, "rho");
  require_psd(s, "sigma");
  const RMatrix overlap = (r.vectors.adjoint() * s.vectors).cwiseAbs2();
  double val = 0;
  for (int i = 0; i < r.dim(); ++i) {
    const double li = r.values[i];
    if (li <= tol::support) continue;
    double ker = 0, cross = 0;
    for (int j = 0; j < s.dim(); ++j) {
      if (s.values[j] <= tol::support)
        ker += overlap(i, j);
      else
        cross += overlap(i, j) * std::log(s.values[j]);
    }
    if (ker > tol::kernel_overlap) return EntropyValue::from_nats(kInf);
    val += li * (std::log(li) - cross);
  }
  return EntropyValue::from_nats(val);
}

EntropyValue renyi_relative_entropy(const DensityMatrix& rho, const Operator& sigma, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("renyi_relative_entropy: alpha must lie in (0,1)");
  const Operator ra = matrix_function(rho.op(), ScalarMap::power(alpha));
  const Operator sb = matrix_function(sigma, ScalarMap::power(1.0 - alpha));
  const double q = ra.trace_product(sb);
  if (!(q > 0)) return EntropyValue::from_nats(kInf);
  return EntropyValue::from_nats(std::log(q) / (alpha - 1.0));
}

double renyi_one_minus_p(const Operator& a, const Operator& b, double p) {
  if (!(p > 0 && p < 1)) throw DomainError("renyi_one_minus_p: p must lie in (0,1)");
  const double q = matrix_function(a, ScalarMap::power(p)).trace_product(matrix_function(b, ScalarMap::power(1.0 - p)));
  if (!(q > 0)) return kInf;
  return -std::log(q) / p;
}

EntropyValue mutual_information(const DensityMatrix& rho_ab, std::vector<int> a_side) {
  const int ns = rho_ab.op().num_subsystems();
  std::sort(a_side.begin(), a_side.end());
  if (a_side.empty() || static_cast<int>(a_side.size()) >= ns)
    throw DimensionError("mutual_information: cut must leave both sides nonempty");
  for (int k : a_side)
    if (k < 0 || k >= ns) throw DimensionError("mutual_information: subsystem index out of range");
  if (std::adjacent_find(a_side.begin(), a_side.end()) != a_side.end())
    throw DimensionError("mutual_information: repeated subsystem index");
  std::vector<int> b_side;
  for (int k = 0; k < ns; ++k)
    if (!std::binary_search(a_side.begin(), a_side.end(), k)) b_side.push_back(k);

  std::vector<int> perm = a_side;
  perm.insert(perm.end(), b_side.begin(), b_side.end());
  const Operator ordered = permute_subsystems(rho_ab.op(), perm);
  const Operator ra = partial_trace(rho_ab.op(), a_side);
  const Operator rb = partial_trace(rho_ab.op(), b_side);
  const EntropyValue d = relative_entropy(ordered, tensor(ra, rb));
  return EntropyValue::from_nats(std::max(0.0, d.nats));
}

EntropyValue conditional_entropy(const DensityMatrix& rho_ab, int conditioning) {
  return conditional_entropy(rho_ab, std::vector<int>{conditioning});
}

EntropyValue conditional_entropy(const DensityMatrix& rho_ab, std::vector<int> conditioning) {
  const int ns = rho_ab.op().num_subsystems();
  std::sort(conditioning.begin(), conditioning.end());
  if (conditioning.empty() || static_cast<int>(conditioning.size()) >= ns)
    throw DimensionError("conditional_entropy: need a nonempty conditioning side and a nonempty rest");
  for (int k : conditioning)
    if (k < 0 || k >= ns) throw DimensionError("conditional_entropy: subsystem index out of range");
  if (std::adjacent_find(conditioning.begin(), conditioning.end()) != conditioning.end())
    throw DimensionError("conditional_entropy: repeated subsystem index");
  std::vector<int> a_side;
  for (int k = 0; k < ns; ++k)
    if (!std::binary_search(conditioning.begin(), conditioning.end(), k)) a_side.push_back(k);

  std::vector<int> perm = a_side;
  perm.insert(perm.end(), conditioning.begin(), conditioning.end());
  const Operator ordered = permute_subsystems(rho_ab.op(), perm);
  std::vector<int> adims;
  for (int k : a_side) adims.push_back(rho_ab.op().subsystem_dims()[static_cast<std::size_t>(k)]);
  const Operator rb = partial_trace(rho_ab.op(), conditioning);
  const EntropyValue d = relative_entropy(ordered, tensor(Operator::identity(adims), rb));
  return EntropyValue::from_nats(-d.nats);
}

EntropyValue binary_entropy(double p) {
  if (!(p >= 0 && p <= 1)) throw DomainError("binary_entropy: p must lie in [0,1]");
  double h = 0;
  if (p > 0) h -= p * std::log(p);
  if (p < 1) h -= (1 - p) * std::log(1 - p);
  return EntropyValue::from_nats(h);
}

double shannon_entropy(std::span<const double> p) {
  double h = 0;
  for (double v : p)
    if (v > 0) h -= v * std::log(v);
  return h;
}

EntropyValue classical_kl(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionError("classical_kl: length mismatch");
  double d = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] < 0) throw DomainError("classical_kl: q must be nonnegative");
    if (p[i] <= 0) continue;
    if (q[i] <= 0) return EntropyValue::from_nats(kInf);
    d += p[i] * std::log(p[i] / q[i]);
  }
  return EntropyValue::from_nats(d);
}

double classical_mutual_information(const std::vector<std::vector<double>>& joint) {
  if (joint.empty()) return 0.0;
  const std::size_t ny = joint[0].size();
  std::vector<double> px(joint.size(), 0.0), py(ny, 0.0);
  for (std::size_t x = 0; x < joint.size(); ++x) {
    if (joint[x].size() != ny) throw DimensionError("classical_mutual_information: ragged joint");
    for (std::size_t y = 0; y < ny; ++y) {
      px[x] += joint[x][y];
      py[y] += joint[x][y];
    }
  }
  double i = 0;
  for (std::size_t x = 0; x < joint.size(); ++x)
    for (std::size_t y = 0; y < ny; ++y)
      if (joint[x][y] > 0) i += joint[x][y] * std::log(joint[x][y] / (px[x] * py[y]));
  return std::max(0.0, i);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
  const Operator sr = matrix_function(rho.op(), ScalarMap::power(0.5));
  const CMatrix m = sr.matrix() * sigma.matrix() * sr.matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> es((m + m.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  double s = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s += std::sqrt(std::max(0.0, es.eigenvalues()[i]));
  return std::min(1.0, s * s);
}

EntropyValue relative_entropy_variational_value(const DensityMatrix& rho, const Operator& sigma,
                                                const Operator& g) {
  if (rho.dim() != sigma.dim() || rho.dim() != g.dim())
    throw DimensionError("relative_entropy_variational_value: dimension mismatch");
  const Spectrum gs = eig_hermitian(g);
  if (gs.values.minCoeff() <= 0) throw DomainError("variational value: G must be positive definite");
  const Operator log_g = matrix_function(gs, ScalarMap::log(), g.subsystem_dims());
  const Spectrum ss = eig_hermitian(sigma);
  require_psd(ss, "sigma");
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < ss.values.size(); ++j)
    if (ss.values[j] > tol::support) support.push_back(j);
  if (support.empty()) throw DomainError("variational value: sigma is zero");
  const auto r = static_cast<Eigen::Index>(support.size());
  CMatrix w(sigma.dim(), r);
  RVector lsig(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    w.col(k) = ss.vectors.col(support[static_cast<std::size_t>(k)]);
    lsig[k] = std::log(ss.values[support[static_cast<std::size_t>(k)]]);
  }
  const CMatrix h = CMatrix(lsig.cast<cplx>().asDiagonal()) + w.adjoint() * log_g.matrix() * w;
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  // ln sum e^{v} computed stably
  const RVector& v = es.eigenvalues();
  const double top = v.maxCoeff();
  double acc = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::exp(v[i] - top);
  return EntropyValue::from_nats(rho.op().trace_product(log_g) - (top + std::log(acc)));
}

DensityMatrix cq_state(std::span<const double> p, std::span<const DensityMatrix> states) {
  if (p.size() != states.size() || p.empty()) throw DimensionError("cq_state: size mismatch");
  const int nx = static_cast<int>(p.size());
  const int d = states[0].dim();
  CMatrix m = CMatrix::Zero(nx * d, nx * d);
  for (int x = 0; x < nx; ++x) {
    if (states[static_cast<std::size_t>(x)].dim() != d) throw DimensionError("cq_state: state dims differ");
    m.block(x * d, x * d, d, d) = p[static_cast<std::size_t>(x)] * states[static_cast<std::size_t>(x)].matrix();
  }
  return DensityMatrix(make_trusted(std::move(m), {nx, d}));
}

}  // namespace qsc
