#include "qsc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "qsc/bottleneck.hpp"
#include "qsc/bounds.hpp"
#include "qsc/entropy.hpp"
#include "qsc/errors.hpp"
#include "qsc/hypothesis.hpp"
#include "qsc/random.hpp"
#include "qsc/report.hpp"
#include "qsc/semigroup.hpp"

namespace qsc {

namespace {

using Rows = std::vector<SweepRow>;

double pick(Rng& rng, std::initializer_list<double> values) {
  const int i = uniform_int(rng, 0, static_cast<int>(values.size()) - 1);
  return *(values.begin() + i);
}

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

SweepRow row(std::vector<std::string> params, double lhs, double rhs) {
  SweepRow r;
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = lhs - rhs;
  return r;
}

SweepRow row(std::vector<std::string> params, const InequalityMargin& m) {
  SweepRow r = row(std::move(params), m.lhs, m.rhs);
  r.margin = m.margin;
  r.vacuous = m.vacuous;
  return r;
}

std::vector<DensityMatrix> random_letters(Rng& rng, int count, int dim) {
  std::vector<DensityMatrix> s;
  for (int i = 0; i < count; ++i) s.push_back(random_density(dim, rng, 0.01));
  return s;
}

CQSource random_source(Rng& rng, int nx, int d) {
  auto q = random_dirichlet(nx, rng);
  for (auto& v : q) v = 0.5 * v + 0.5 / nx;
  double s = 0;
  for (double v : q) s += v;
  for (auto& v : q) v /= s;
  q.back() = 1.0;
  for (int i = 0; i + 1 < nx; ++i) q.back() -= q[static_cast<std::size_t>(i)];
  return CQSource({}, q, random_letters(rng, nx, d));
}

std::vector<double> random_measure(Rng& rng, std::size_t k) {
  auto m = random_dirichlet(static_cast<int>(k), rng);
  const double mass = uniform(rng, 0.5, 1.0);
  for (auto& v : m) v *= mass;
  return m;
}

Operator random_projector(Rng& rng, int dim) {
  const int rank = uniform_int(rng, 1, dim);
  const CMatrix u = random_unitary(dim, rng);
  CMatrix p = u.leftCols(rank) * u.leftCols(rank).adjoint();
  return make_trusted((p + p.adjoint()) * 0.5, {dim});
}

// --- suites -----------------------------------------------------------------

Rows suite_alt(Rng& rng) {
  const int d = uniform_int(rng, 2, 4);
  const double r = uniform01(rng);
  const Operator a = random_positive(d, rng, 1.0), b = random_positive(d, rng, 1.0);
  return {row({std::to_string(d), fmt(r)}, check_alt(a, b, r))};
}

Rows suite_reverse_holder(Rng& rng) {
  const int d = uniform_int(rng, 2, 4);
  // |p| < 0.2 is excluded: sigma^{1/2p} spans (1/floor)^{1/|p|} and every
  // eigenvalue of the sandwich contributes to tr|.|^p, so doubles lose it.
  const double p = uniform01(rng) < 0.5 ? uniform(rng, -3.0, -0.2) : uniform(rng, 0.2, 0.95);
  const DensityMatrix sigma = random_density(d, rng, 0.02);
  const Operator a = random_positive(d, rng, 1.0), b = random_positive(d, rng, 1.0);
  return {row({std::to_string(d), fmt(p)}, check_reverse_holder(a, b, p, sigma))};
}

Rows suite_reverse_alt(Rng& rng) {
  const int d = uniform_int(rng, 2, 4);
  const double r = uniform(rng, 0.05, 1.0);
  const double total = 1.0 / (2.0 * r) - 0.5;
  const double split = uniform01(rng);
  const double inf = std::numeric_limits<double>::infinity();
  const double a_exp = split * total > 0 ? 1.0 / (split * total) : inf;
  const double b_exp = (1.0 - split) * total > 0 ? 1.0 / ((1.0 - split) * total) : inf;
  const Operator a = random_positive(d, rng, 1.0), b = random_positive(d, rng, 1.0);
  return {row({std::to_string(d), fmt(r), fmt(a_exp), fmt(b_exp)}, check_reverse_alt(a, b, r, a_exp, b_exp))};
}

Rows suite_rhc(Rng& rng) {
  const int n = uniform_int(rng, 1, 3);
  const int d = n == 3 ? 2 : uniform_int(rng, 2, n == 1 ? 4 : 3);
  // p <= q < 1 with |p|, |q| >= 0.2 (same conditioning limit as reverse-holder)
  const double q = uniform01(rng) < 0.5 ? uniform(rng, -2.0, -0.2) : uniform(rng, 0.2, 0.95);
  double p = q - uniform(rng, 0.0, 2.0);
  if (std::abs(p) < 0.2) p = q < 0 ? q : -0.2 - (0.2 - std::abs(p));
  std::vector<DensityMatrix> sites;
  for (int k = 0; k < n; ++k) sites.push_back(random_density(d, rng, 0.02));
  const Operator g = random_positive(static_cast<int>(std::pow(d, n)), rng, 1.0)
                         .with_dims(std::vector<int>(static_cast<std::size_t>(n), d));
  const double thr = rhc_time_threshold(p, q);
  Rows out;
  for (double extra : {0.0, 0.5}) {
    const double t = thr + extra;
    out.push_back(row({std::to_string(n), std::to_string(d), fmt(p), fmt(q), fmt(t)}, check_rhc(g, sites, p, q, t)));
  }
  return out;
}

Rows suite_entropy(Rng& rng) {
  const int d = uniform_int(rng, 2, 4);
  const int dout = uniform_int(rng, 2, 3);
  const int env = (d + dout - 1) / dout + uniform_int(rng, 0, 1);
  const CMatrix v = random_isometry(d, dout * env, rng);
  const auto channel = [&](const DensityMatrix& s) {
    CMatrix m = v * s.matrix() * v.adjoint();
    return partial_trace(DensityMatrix::trusted(make_trusted((m + m.adjoint()) * 0.5, {dout, env})), {0});
  };
  const DensityMatrix rho = random_density(d, rng, 0.0), sigma = random_density(d, rng, 0.01);
  const DensityMatrix nr = channel(rho), ns = channel(sigma);
  const double alpha = uniform(rng, 0.05, 0.95);
  const std::string dims = std::to_string(d) + "->" + std::to_string(dout);
  return {row({dims, "D", "1"}, relative_entropy(rho, sigma.op()).nats, relative_entropy(nr, ns.op()).nats),
          row({dims, "D_alpha", fmt(alpha)}, renyi_relative_entropy(rho, sigma.op(), alpha).nats,
              renyi_relative_entropy(nr, ns.op(), alpha).nats)};
}

// lambda beta >= (1 - eps) - tr(rho0 - lambda rho1)_+ for every lambda > 0
Rows suite_np(Rng& rng) {
  const int d = uniform_int(rng, 2, 4);
  const DensityMatrix r0 = random_density(d, rng, 0.0), r1 = random_density(d, rng, 0.0);
  const double eps = uniform(rng, 0.01, 0.9);
  const double lambda = std::exp(uniform(rng, -3.0, 3.0));
  const auto np = neyman_pearson_beta(r0, r1, eps);
  const Spectrum s = eig_hermitian(r0.op() - lambda * r1.op());
  double pos = 0;
  for (int i = 0; i < s.dim(); ++i) pos += std::max(0.0, s.values[i]);
  return {row({std::to_string(d), fmt(eps), fmt(lambda)}, lambda * np.beta, (1.0 - eps) - pos)};
}

Rows suite_delta(Rng& rng) {
  const int nx = uniform_int(rng, 2, 3), d = uniform_int(rng, 2, 3);
  const double c = pick(rng, {1.0, 1.5, 2.0});
  const DeltaInstance inst(random_measure(rng, static_cast<std::size_t>(nx)), CQChannel(random_letters(rng, nx, d)),
                           random_density(d, rng, 0.05).op(), c);
  DeltaOptions opt;
  opt.exec = Execution::serial;
  const DeltaResult r = delta(inst, opt);
  const Operator t = random_positive(d, rng, 1.0);
  const std::vector<std::string> p{std::to_string(nx), std::to_string(d), fmt(c)};
  auto pr = p, pi = p;
  pr.push_back("random_T");
  pi.push_back("induced_T");
  return {row(pr, r.value, delta_variational_value(inst, t)),
          row(pi, r.value, delta_variational_value(inst, delta_induced_test(inst, r.gamma_opt)))};
}

Rows suite_key(Rng& rng) {
  const int n = uniform_int(rng, 1, 2);
  const CQSource src = random_source(rng, 2, 2);
  const double c = pick(rng, {1.5, 2.0});
  const double t = pick(rng, {0.1, 0.5, 1.0});
  const int dim = n == 1 ? 2 : 4;
  const Operator tn = uniform01(rng) < 0.5 ? Operator::projector(random_ginibre(dim, 1, rng).col(0).normalized())
                                           : random_test(dim, rng);
  const auto mu = random_measure(rng, n == 1 ? 2 : 4);
  DeltaOptions opt;
  opt.exec = Execution::serial;
  return {row({std::to_string(n), fmt(c), fmt(t)}, verify_key_inequality(mu, src, tn, c, t, opt))};
}

Rows suite_image_size(Rng& rng) {
  const int n = uniform_int(rng, 1, 3);
  const CQSource src = random_source(rng, 2, 2);
  const DensityMatrix sigma = uniform01(rng) < 0.5 ? src.rho_y() : random_density(2, rng, 0.05);
  const double c = uniform(rng, 0.5, 3.0);
  const double delta = uniform(rng, 0.05, 0.95);
  const int dim = 1 << n;
  const Operator tn = uniform01(rng) < 0.5 ? random_projector(rng, dim) : random_test(dim, rng);
  const auto mu = random_measure(rng, static_cast<std::size_t>(dim));
  DeltaOptions opt;
  opt.exec = Execution::serial;
  return {row({std::to_string(n), fmt(c), fmt(delta)}, image_size_bound_i(mu, src, sigma, tn, c, delta, opt))};
}

Rows suite_expurgation(Rng& rng) {
  const int n = uniform_int(rng, 1, 2);
  const CQSource src = product_source(random_source(rng, 2, 2), n);
  const int w = uniform_int(rng, 2, 5);
  RMatrix k(static_cast<Eigen::Index>(src.size()), w);
  for (Eigen::Index x = 0; x < k.rows(); ++x) {
    const auto d = random_dirichlet(w, rng, 0.5);
    for (int u = 0; u < w; ++u) k(x, u) = d[static_cast<std::size_t>(u)];
  }
  const EncodedSource enc = apply_encoder(src, StochasticChannel(k));
  std::vector<Operator> tests;
  for (int i = 0; i < w; ++i) tests.push_back(random_test(src.output_dim(), rng).with_dims(src.channel().output_dims()));
  const TestFamily fam(tests);
  const DensityMatrix rho1 = random_density(src.output_dim(), rng, 0.0);
  const double ep = uniform(rng, 0.02, 0.98);
  const ExpurgationResult r = expurgate(fam, enc, rho1, ep);
  const std::vector<std::string> p{std::to_string(n), std::to_string(w), fmt(ep)};
  auto pa = p, pb = p;
  pa.push_back("alpha");
  pb.push_back("beta");
  return {row(pa, r.alpha_old + ep, r.alpha_new), row(pb, r.beta_old / ep, r.max_retained_beta)};
}

Rows suite_continuity(Rng& rng) {
  const CQSource src = random_source(rng, 2, 2);
  const double c = pick(rng, {1.0, 1.5, 2.0});
  const double eps = uniform(rng, 0.01, 0.5);
  // p_tilde = q + eps * q * (v - <v>_q) keeps p_tilde <= (1+eps) q and sums to 1
  std::vector<double> pt(src.size());
  const double v0 = uniform01(rng);
  const double mean = src.q()[0] * v0 + src.q()[1] * (1.0 - v0);
  pt[0] = src.q()[0] * (1.0 + eps * (v0 - mean));
  pt[1] = 1.0 - pt[0];
  DeltaStarOptions opt;
  opt.exec = Execution::serial;
  opt.starts = 16;
  return {row({fmt(c), fmt(eps)}, continuity_margin(pt, src.q(), src.channel().letter_states(), src.rho_y(), c, eps,
                                                   static_cast<int>(src.size()) + 1, opt))};
}

struct SuiteDef {
  std::string name;
  std::vector<std::string> params;
  double tolerance;
  bool relative;
  std::size_t default_instances;
  std::function<Rows(Rng&)> fn;
};

const std::vector<SuiteDef>& registry() {
  static const std::vector<SuiteDef> defs{
      {"alt", {"dim", "r"}, 1e-10, false, 500, suite_alt},
      {"reverse-holder", {"dim", "p"}, 1e-10, false, 500, suite_reverse_holder},
      {"reverse-alt", {"dim", "r", "a", "b"}, 1e-10, false, 500, suite_reverse_alt},
      {"rhc", {"n", "dim", "p", "q", "t"}, 1e-9, false, 500, suite_rhc},
      {"entropy", {"dims", "quantity", "alpha"}, 1e-8, false, 500, suite_entropy},
      {"np", {"dim", "eps", "lambda"}, 1e-9, false, 200, suite_np},
      {"delta", {"nx", "dy", "c", "test"}, 1e-8, false, 100, suite_delta},
      {"key", {"n", "c", "t"}, 1e-6, true, 100, suite_key},
      {"image-size", {"n", "c", "delta"}, 1e-6, false, 100, suite_image_size},
      {"expurgation", {"n", "messages", "eps_prime", "check"}, 1e-10, false, 200, suite_expurgation},
      {"continuity", {"c", "eps"}, 1e-5, false, 20, suite_continuity},
  };
  return defs;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& d : registry()) v.push_back(d.name);
    return v;
  }();
  return names;
}

std::size_t default_instances(const std::string& suite) {
  for (const auto& d : registry())
    if (d.name == suite) return d.default_instances;
  throw ValidationError("unknown suite '" + suite + "'");
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, std::size_t instances, Execution exec) {
  const auto& defs = registry();
  std::size_t idx = defs.size();
  for (std::size_t i = 0; i < defs.size(); ++i)
    if (defs[i].name == name) idx = i;
  if (idx == defs.size()) throw ValidationError("unknown suite '" + name + "'");
  const SuiteDef& def = defs[idx];
  const std::uint64_t suite_seed = mix_seed(seed, 0x51700000u + idx);

  const auto per_instance = parallel_map(
      instances,
      [&](std::size_t i) {
        const std::uint64_t s = mix_seed(suite_seed, i);
        Rng rng(s);
        Rows rows = def.fn(rng);
        for (auto& r : rows) {
          r.instance_id = i;
          r.seed = s;
        }
        return rows;
      },
      exec);

  SuiteResult res;
  res.name = def.name;
  res.param_names = def.params;
  res.tolerance = def.tolerance;
  res.relative = def.relative;
  res.worst = std::numeric_limits<double>::infinity();
  for (const auto& rows : per_instance)
    for (const auto& r : rows) {
      res.rows.push_back(r);
      if (r.vacuous) continue;
      const double m = def.relative ? InequalityMargin::of(r.lhs, r.rhs).relative() : r.margin;
      res.worst = std::min(res.worst, m);
      if (!(m >= -def.tolerance)) ++res.violations;
    }
  if (!std::isfinite(res.worst) && res.rows.empty()) res.worst = 0.0;
  res.pass = res.violations == 0;
  return res;
}

std::vector<std::string> csv_header(const SuiteResult& r) {
  std::vector<std::string> h{"instance_id", "seed"};
  h.insert(h.end(), r.param_names.begin(), r.param_names.end());
  for (const char* c : {"lhs", "rhs", "margin"}) h.emplace_back(c);
  return h;
}

std::vector<std::vector<std::string>> csv_rows(const SuiteResult& r) {
  std::vector<std::vector<std::string>> out;
  for (const auto& row : r.rows) {
    std::vector<std::string> v{std::to_string(row.instance_id), std::to_string(row.seed)};
    v.insert(v.end(), row.params.begin(), row.params.end());
    if (row.vacuous) {
      v.insert(v.end(), {"vacuous", "vacuous", "vacuous"});
    } else {
      v.push_back(fmt(row.lhs));
      v.push_back(fmt(row.rhs));
      v.push_back(fmt(row.margin));
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace qsc
