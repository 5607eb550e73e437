#include "qsc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "qsc/entropy.hpp"
#include "qsc/errors.hpp"
#include "qsc/semigroup.hpp"

namespace qsc {

namespace {

int sites_of(std::size_t length, std::size_t alphabet) {
  int n = 0;
  std::size_t v = 1;
  while (v < length) {
    v *= alphabet;
    ++n;
  }
  if (v != length || n == 0) throw DimensionError("measure length is not a power of the alphabet size");
  return n;
}

void require_full_rank(const CQSource& src, const char* who) {
  if (!src.rho_y_full_rank()) {
    std::ostringstream os;
    os << who << ": rho_Y is singular, so gamma is infinite";
    throw PreconditionError(os.str());
  }
}

std::vector<int> encoder_digits(std::size_t index, std::size_t inputs, std::size_t messages) {
  std::vector<int> f(inputs);
  for (std::size_t i = inputs; i-- > 0;) {
    f[i] = static_cast<int>(index % messages);
    index /= messages;
  }
  return f;
}

}  // namespace

ThetaEstimate theta_n_lower(const CQSource& src0, const std::vector<DensityMatrix>& alt_states, int n, double r1,
                            bool r2_infinite, Execution exec, const Limits& limits) {
  if (!r2_infinite) throw PreconditionError("theta_n_lower: only r2 = infinity is supported");
  if (!(r1 >= 0)) throw DomainError("theta_n_lower: r1 must be nonnegative");
  if (alt_states.size() != src0.size()) throw DimensionError("theta_n_lower: alternative family has the wrong length");
  const CQSource s0 = product_source(src0, n, limits);
  const CQChannel alt = CQChannel(alt_states, 1).power(n);
  if (alt.output_dim() != s0.output_dim()) throw DimensionError("theta_n_lower: alternative output dimension differs");
  const std::size_t inputs = s0.size();
  const std::size_t messages = message_count(n, r1);
  const std::size_t w_eff = std::min(messages, inputs);
  const bool identity_only = w_eff == inputs;
  const double count = identity_only ? 1.0 : std::pow(static_cast<double>(w_eff), static_cast<double>(inputs));
  if (count > static_cast<double>(limits.max_encoders)) {
    std::ostringstream os;
    os << "theta_n_lower: " << count << " encoders exceed the cap " << limits.max_encoders;
    throw ResourceError(os.str());
  }
  const auto dims = s0.channel().output_dims();

  const auto score = [&](const std::vector<int>& f) {
    double d = 0;
    for (std::size_t w = 0; w < w_eff; ++w) {
      std::vector<double> weights(inputs, 0.0);
      double p = 0;
      for (std::size_t x = 0; x < inputs; ++x)
        if (static_cast<std::size_t>(f[x]) == w) {
          weights[x] = s0.q()[x];
          p += weights[x];
        }
      if (p <= EncodedSource::drop_threshold) continue;
      const Operator a = make_trusted(s0.channel().mixture(weights), dims);
      const Operator b = make_trusted(alt.mixture(weights), dims);
      d += relative_entropy(a, b).nats;
    }
    return d / n;
  };

  ThetaEstimate out;
  std::vector<int> best_f;
  if (identity_only) {
    best_f.resize(inputs);
    for (std::size_t x = 0; x < inputs; ++x) best_f[x] = static_cast<int>(x);
    out.value = score(best_f);
    out.encoders = 1;
  } else {
    const auto total = static_cast<std::size_t>(count);
    const auto vals = parallel_map(total, [&](std::size_t i) { return -score(encoder_digits(i, inputs, w_eff)); }, exec);
    const std::size_t b = ordered_argmin(vals);
    best_f = encoder_digits(b, inputs, w_eff);
    out.value = -vals[b];
    out.encoders = total;
  }
  out.encoder = StochasticChannel::deterministic(best_f, static_cast<int>(w_eff));
  return out;
}

SteinObjective stein_independence_objective(const CQSource& src, const StochasticChannel& chan) {
  if (static_cast<std::size_t>(chan.in_size()) != src.size())
    throw DimensionError("stein_independence_objective: channel input alphabet does not match the source");
  std::vector<DensityMatrix> states;
  for (std::size_t x = 0; x < src.size(); ++x) states.push_back(src.state(x));
  const auto cp = with_posterior(src.q(), states, chan);
  double cond = 0;
  for (std::size_t u = 0; u < cp.p_u.size(); ++u)
    if (cp.sigma_y_given_u[u]) cond += cp.p_u[u] * von_neumann_entropy(*cp.sigma_y_given_u[u]).nats;
  std::vector<std::vector<double>> joint(src.size(), std::vector<double>(static_cast<std::size_t>(chan.out_size())));
  for (std::size_t x = 0; x < src.size(); ++x)
    for (int u = 0; u < chan.out_size(); ++u)
      joint[x][static_cast<std::size_t>(u)] = src.q()[x] * chan(static_cast<int>(x), u);
  SteinObjective out;
  out.i_uy = std::max(0.0, von_neumann_entropy(src.rho_y()).nats - cond);
  out.i_ux = classical_mutual_information(joint);
  return out;
}

ConstrainedSup bottleneck_sup_constrained(const CQSource& src, double r, int u_size, const DeltaStarOptions& opt) {
  if (!(r >= 0)) throw DomainError("bottleneck_sup_constrained: r must be nonnegative");
  if (src.sites() != 1) throw DomainError("bottleneck_sup_constrained: source must be single-letter");
  const auto& states = src.channel().letter_states();
  std::map<double, double> cache;
  const auto f = [&](double c) {
    auto it = cache.find(c);
    if (it == cache.end()) it = cache.emplace(c, delta_star(src.q(), states, src.rho_y().op(), c, u_size, opt).value).first;
    return (it->second + r) / c;
  };

  ConstrainedSup out;
  out.mutual_information = mutual_information(src.joint(), {0}).nats;
  std::vector<double> grid;
  for (int k = 0; k <= 60; ++k) grid.push_back(1.0 + 0.25 * k);
  std::size_t kb = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double v = f(grid[k]);
    out.lagrangian_curve.emplace_back(grid[k], v);
    if (v < best) {
      best = v;
      kb = k;
    }
  }
  double c_best = grid[kb];

  // f is convex in s = 1/c
  double s_hi = 1.0 / grid[kb == 0 ? 0 : kb - 1];
  double s_lo = kb + 1 < grid.size() ? 1.0 / grid[kb + 1] : 1.0 / 64.0;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = s_lo, b = s_hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(1.0 / x1), f2 = f(1.0 / x2);
  for (int it = 0; it < 40 && b - a > 1e-9; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(1.0 / x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(1.0 / x2);
    }
  }
  for (const auto& [c, v] : std::vector<std::pair<double, double>>{{1.0 / x1, f1}, {1.0 / x2, f2}})
    if (v < best) {
      best = v;
      c_best = c;
    }
  if (out.mutual_information <= best) {
    best = out.mutual_information;
    c_best = std::numeric_limits<double>::infinity();
  }
  out.value = best;
  out.c_opt = c_best;
  return out;
}

InequalityMargin verify_key_inequality(const std::vector<double>& mu_n, const CQSource& src, const Operator& t_n,
                                       double c, double t, const DeltaOptions& opt) {
  if (!(c > 1)) throw DomainError("verify_key_inequality: c must exceed 1");
  if (!(t > 0)) throw DomainError("verify_key_inequality: t must be positive");
  require_full_rank(src, "verify_key_inequality");
  const int n = sites_of(mu_n.size(), src.size());
  const CQChannel ch = src.channel().power(n);
  if (t_n.dim() != ch.output_dim()) throw DimensionError("verify_key_inequality: test dimension mismatch");
  const Operator tn = t_n.with_dims(ch.output_dims());
  {
    const double lo = min_eigenvalue(tn), hi = max_eigenvalue(tn);
    if (lo < -tol::eig_clip || hi > 1.0 + tol::eig_clip) throw ValidationError("verify_key_inequality: T_n not in [0,1]");
  }
  const Operator rho_yn = tensor_power(src.rho_y().op(), n);
  const DeltaResult d = delta(DeltaInstance(mu_n, ch, rho_yn, c), opt);
  const double psi = std::max(0.0, rho_yn.trace_product(tensor_psi(tn, t, src.gamma(), src.rho_y())));
  const double lhs = std::pow(psi, c) * std::exp(d.value);
  const auto tr = ch.expectations(tn);
  double rhs = 0;
  for (std::size_t x = 0; x < mu_n.size(); ++x)
    if (mu_n[x] > 0) rhs += mu_n[x] * std::pow(std::max(0.0, tr[x]), c * (1.0 + 1.0 / t));
  std::ostringstream digest;
  digest << "n=" << n << " c=" << c << " t=" << t << " delta=" << fmt(d.value);
  return InequalityMargin::of(lhs, rhs, digest.str());
}

double k_eps(double gamma, double eta, std::size_t alphabet, double eps) {
  return 2.0 * std::log(gamma * eta) * std::sqrt(3.0 * eta * std::log(4.0 * static_cast<double>(alphabet) / (1.0 - eps))) +
         2.0 * std::sqrt(2.0 * gamma * std::log(4.0 / (1.0 - eps)));
}

double a_constant(double gamma, double eta, std::size_t alphabet, double c, double eps, double delta) {
  return (c * std::log(gamma) + (c + 1.0) * std::log(eta)) *
             std::sqrt(3.0 * eta * std::log(static_cast<double>(alphabet) / eps)) +
         2.0 * c * std::sqrt(std::max(0.0, gamma - 1.0) * std::log(1.0 / delta));
}

double k_source(int y_dim, double eta, std::size_t alphabet, double eps) {
  return 2.0 * std::log(y_dim * eta) * std::sqrt(3.0 * eta * std::log(4.0 * static_cast<double>(alphabet) / (1.0 - eps))) +
         2.0 * std::sqrt(y_dim * std::log(2.0 / (1.0 - eps)));
}

double stein_threshold(double eta, std::size_t alphabet, double eps) {
  return 3.0 * eta * std::log(4.0 * static_cast<double>(alphabet) / (1.0 - eps));
}

namespace {

void check_eps(double eps, const char* who) {
  if (!(eps > 0 && eps < 1)) {
    std::ostringstream os;
    os << who << ": eps must lie in (0,1)";
    throw DomainError(os.str());
  }
}

void check_threshold(int n, double threshold, const char* who) {
  if (!(n > threshold)) {
    std::ostringstream os;
    os << who << ": n = " << n << " must exceed " << fmt(threshold);
    throw PreconditionError(os.str());
  }
}

}  // namespace

BoundReport sc_bound_stein(const CQSource& src, double r, double eps, int n, int u_size, const SteinBoundOptions& opt) {
  check_eps(eps, "sc_bound_stein");
  if (!(r > 0)) throw DomainError("sc_bound_stein: r must be positive");
  if (n < 1) throw DomainError("sc_bound_stein: n must be >= 1");
  require_full_rank(src, "sc_bound_stein");
  const double thr = stein_threshold(src.eta(), src.size(), eps);
  if (opt.enforce_threshold) check_threshold(n, thr, "sc_bound_stein");
  const ConstrainedSup sup = bottleneck_sup_constrained(src, r, u_size, opt.delta_star);
  const double k = k_eps(src.gamma(), src.eta(), src.size(), eps);
  BoundReport b;
  b.name = "sc_bound_stein";
  b.first_order = sup.value;
  b.second_order = k / std::sqrt(static_cast<double>(n));
  b.third_order = 2.0 / n * std::log(4.0 / (1.0 - eps));
  b.constants["eta"] = src.eta();
  b.constants["gamma"] = src.gamma();
  b.constants["K_eps"] = k;
  b.constants["n_threshold"] = thr;
  b.constants["threshold_met"] = n > thr ? 1.0 : 0.0;
  b.constants["c_opt"] = sup.c_opt;
  b.constants["I(X;Y)"] = sup.mutual_information;
  b.witnesses["threshold"] = opt.enforce_threshold ? "enforced" : "waived";
  b.finalize();
  return b;
}

InequalityMargin image_size_bound_i(const std::vector<double>& mu_n, const CQSource& src, const DensityMatrix& sigma,
                                    const Operator& t_n, double c, double delta, const DeltaOptions& opt) {
  if (!(c > 0)) throw DomainError("image_size_bound_i: c must be positive");
  if (!(delta > 0 && delta < 1)) throw DomainError("image_size_bound_i: delta must lie in (0,1)");
  if (sigma.dim() != src.output_dim()) throw DimensionError("image_size_bound_i: sigma dimension mismatch");
  if (sigma.min_eig() < 1e-10) throw PreconditionError("image_size_bound_i: sigma must be full rank");
  const int n = sites_of(mu_n.size(), src.size());
  const CQChannel ch = src.channel().power(n);
  if (t_n.dim() != ch.output_dim()) throw DimensionError("image_size_bound_i: test dimension mismatch");
  const Operator tn = t_n.with_dims(ch.output_dims());
  if (min_eigenvalue(tn) < -tol::eig_clip || max_eigenvalue(tn) > 1.0 + tol::eig_clip)
    throw ValidationError("image_size_bound_i: T_n not in [0,1]");

  std::ostringstream digest;
  digest << "n=" << n << " c=" << c << " delta=" << delta;
  const auto tr = ch.expectations(tn);
  double prob = 0;
  for (std::size_t x = 0; x < mu_n.size(); ++x)
    if (mu_n[x] > 0 && tr[x] >= delta) prob += mu_n[x];
  if (prob <= 0) return InequalityMargin::vacuously_true(digest.str());

  const Operator sigma_n = tensor_power(sigma.op(), n);
  const double g = gamma_constant(src.channel().letter_states(), sigma.op());
  const DeltaResult d = qsc::delta(DeltaInstance(mu_n, ch, sigma_n, c), opt);
  const double l1 = std::log(1.0 / delta);
  const double bound = d.value + 2.0 * c * std::sqrt(l1) * std::sqrt(n * std::max(0.0, g - 1.0)) + c * l1;
  const double quantity = std::log(prob) - c * std::log(sigma_n.trace_product(tn));
  digest << " gamma=" << fmt(g);
  return InequalityMargin::of(bound, quantity, digest.str());
}

BoundReport image_size_bound_ii(const CQSource& src, const DensityMatrix& sigma, double c, double delta, double eps,
                                int n, int u_size, const DeltaStarOptions& opt) {
  check_eps(eps, "image_size_bound_ii");
  if (!(delta > 0 && delta < 1)) throw DomainError("image_size_bound_ii: delta must lie in (0,1)");
  if (!(c > 0)) throw DomainError("image_size_bound_ii: c must be positive");
  if (src.sites() != 1) throw DomainError("image_size_bound_ii: source must be single-letter");
  if (sigma.min_eig() < 1e-10) throw PreconditionError("image_size_bound_ii: sigma must be full rank");
  const double thr = 3.0 * src.eta() * std::log(static_cast<double>(src.size()) / eps);
  check_threshold(n, thr, "image_size_bound_ii");
  const double g = gamma_constant(src.channel().letter_states(), sigma.op());
  const double a = a_constant(g, src.eta(), src.size(), c, eps, delta);
  const auto ds = delta_star(src.q(), src.channel().letter_states(), sigma.op(), c, u_size, opt);
  BoundReport b;
  b.name = "image_size_bound_ii";
  b.first_order = n * ds.value;
  b.second_order = a * std::sqrt(static_cast<double>(n));
  b.third_order = c * std::log(1.0 / delta);
  b.constants["A"] = a;
  b.constants["eta"] = src.eta();
  b.constants["gamma"] = g;
  b.constants["delta_star"] = ds.value;
  b.constants["n_threshold"] = thr;
  b.finalize();
  return b;
}

BoundReport source_coding_bound(const CQSource& src, double eps, int n, double log_w1, int u_size,
                                const DeltaStarOptions& opt) {
  check_eps(eps, "source_coding_bound");
  if (!(log_w1 >= 0)) throw DomainError("source_coding_bound: log_w1 must be nonnegative");
  require_full_rank(src, "source_coding_bound");
  const double thr = stein_threshold(src.eta(), src.size(), eps);
  check_threshold(n, thr, "source_coding_bound");
  const ConstrainedSup sup = bottleneck_sup_constrained(src, log_w1, u_size, opt);
  const double k = k_source(src.output_dim(), src.eta(), src.size(), eps);
  const double s_y = von_neumann_entropy(src.rho_y()).nats;
  BoundReport b;
  b.name = "source_coding_bound";
  b.first_order = s_y - sup.value;
  b.second_order = -k / std::sqrt(static_cast<double>(n));
  b.third_order = -2.0 / n * std::log(4.0 / (1.0 - eps));
  b.constants["K_source"] = k;
  b.constants["S(rho_Y)"] = s_y;
  b.constants["eta"] = src.eta();
  b.constants["n_threshold"] = thr;
  b.finalize();
  return b;
}

FqPoint fq_point(const CQSource& src, const StochasticChannel& chan, double r_budget) {
  const SteinObjective o = stein_independence_objective(src, chan);
  FqPoint p;
  p.i_ux = o.i_ux;
  p.i_uy = o.i_uy;
  p.value = 2.0 * von_neumann_entropy(src.rho_y()).nats - o.i_uy;
  p.feasible = o.i_ux <= r_budget;
  return p;
}

}  // namespace qsc
