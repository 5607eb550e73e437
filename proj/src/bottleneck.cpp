#include "qsc/bottleneck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "qsc/entropy.hpp"
#include "qsc/errors.hpp"
#include "qsc/random.hpp"

namespace qsc {

namespace {

constexpr double kLogFloor = 1e-30;
constexpr double kDeadMessage = 1e-14;

// ln of a PSD matrix with eigenvalues floored at 1e-30
CMatrix log_floor(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((m + m.adjoint()) * 0.5);
  RVector lv = es.eigenvalues().unaryExpr([](double v) { return std::log(std::max(v, kLogFloor)); });
  return es.eigenvectors() * lv.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

double log_sum_exp(const std::vector<double>& a) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : a) mx = std::max(mx, v);
  if (!std::isfinite(mx)) return mx;
  double s = 0;
  for (double v : a) s += std::exp(v - mx);
  return mx + std::log(s);
}

// sum gamma ln(gamma/mu)
double kl_to_measure(const std::vector<double>& g, const std::vector<double>& mu) {
  double s = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] <= 0) continue;
    if (mu[i] <= 0) return std::numeric_limits<double>::infinity();
    s += g[i] * std::log(g[i] / mu[i]);
  }
  return s;
}

struct DeltaEval {
  double value;
  std::vector<double> e;  // tr[rho^x (ln sigma_gamma - ln nu)]
};

DeltaEval eval_delta(const DeltaInstance& inst, const CMatrix& log_nu, const std::vector<double>& g) {
  const CMatrix sigma = inst.channel.mixture(g);
  const CMatrix l = log_floor(sigma) - log_nu;
  DeltaEval out{0.0, inst.channel.expectations(l)};
  double d = 0;
  for (std::size_t x = 0; x < g.size(); ++x)
    if (g[x] > 0) d += g[x] * out.e[x];
  out.value = inst.c * d - kl_to_measure(g, inst.mu);
  return out;
}

struct FixedPointRun {
  double value;
  std::vector<double> gamma;
  int iterations;
};

FixedPointRun fixed_point(const DeltaInstance& inst, const CMatrix& log_nu, std::vector<double> g, int max_it,
                          double tolerance) {
  const std::size_t m = g.size();
  DeltaEval cur = eval_delta(inst, log_nu, g);
  int it = 0;
  std::vector<double> logits(m);
  for (; it < max_it; ++it) {
    for (std::size_t x = 0; x < m; ++x)
      logits[x] = inst.mu[x] > 0 ? std::log(inst.mu[x]) + inst.c * cur.e[x] : -std::numeric_limits<double>::infinity();
    const double z = log_sum_exp(logits);
    std::vector<double> next(m);
    for (std::size_t x = 0; x < m; ++x) next[x] = inst.mu[x] > 0 ? std::exp(logits[x] - z) : 0.0;
    DeltaEval ne = eval_delta(inst, log_nu, next);
    const double change = ne.value - cur.value;
    if (ne.value >= cur.value || !std::isfinite(cur.value)) {
      g = std::move(next);
      cur = std::move(ne);
    }
    if (std::abs(change) < tolerance) {
      ++it;
      break;
    }
  }
  return {cur.value, std::move(g), it};
}

void compositions(int total, std::size_t parts, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& f) {
  if (cur.size() + 1 == parts) {
    cur.push_back(total);
    f(cur);
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur.push_back(k);
    compositions(total - k, parts, cur, f);
    cur.pop_back();
  }
}

}  // namespace

DeltaInstance::DeltaInstance(std::vector<double> mu_, CQChannel channel_, Operator nu_, double c_)
    : mu(std::move(mu_)), channel(std::move(channel_)), nu(std::move(nu_)), c(c_) {
  if (!(c > 0) || !std::isfinite(c)) throw DomainError("Delta: c must be positive");
  if (mu.size() != channel.inputs()) throw DimensionError("Delta: mu length differs from the channel alphabet");
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (!(mu[i] >= 0) || !std::isfinite(mu[i])) {
      std::ostringstream os;
      os << "Delta: mu[" << i << "] = " << mu[i] << " is not a nonnegative number";
      throw ValidationError(os.str());
    }
  if (nu.dim() != channel.output_dim()) throw DimensionError("Delta: nu dimension differs from the channel output");
  if (min_eigenvalue(nu) < 1e-10) throw ValidationError("Delta: nu must have min eigenvalue >= 1e-10");
}

double delta_objective(const DeltaInstance& inst, const std::vector<double>& gamma) {
  if (gamma.size() != inst.mu.size()) throw DimensionError("delta_objective: gamma length mismatch");
  const CMatrix log_nu = matrix_function(inst.nu, ScalarMap::log()).matrix();
  return eval_delta(inst, log_nu, gamma).value;
}

DeltaResult delta(const DeltaInstance& inst, const DeltaOptions& opt) {
  std::vector<std::size_t> supp;
  for (std::size_t x = 0; x < inst.mu.size(); ++x)
    if (inst.mu[x] > 0) supp.push_back(x);
  if (supp.empty()) throw DomainError("Delta: mu has empty support");
  const std::size_t m = inst.mu.size();
  const CMatrix log_nu = matrix_function(inst.nu, ScalarMap::log()).matrix();
  const double mass = std::accumulate(inst.mu.begin(), inst.mu.end(), 0.0);

  // start 0: mu normalized; 1: uniform on the support; then vertices; then Dirichlet
  const auto start = [&](std::size_t k) {
    std::vector<double> g(m, 0.0);
    if (k == 0) {
      for (std::size_t x : supp) g[x] = inst.mu[x] / mass;
    } else if (k == 1) {
      for (std::size_t x : supp) g[x] = 1.0 / static_cast<double>(supp.size());
    } else if (k - 2 < supp.size() && k < static_cast<std::size_t>(opt.starts) / 2) {
      g[supp[k - 2]] = 1.0;
    } else {
      Rng rng(mix_seed(opt.seed, k));
      const auto d = random_dirichlet(static_cast<int>(supp.size()), rng);
      for (std::size_t i = 0; i < supp.size(); ++i) g[supp[i]] = d[i];
    }
    return g;
  };

  const auto runs = parallel_map(
      static_cast<std::size_t>(std::max(1, opt.starts)),
      [&](std::size_t k) { return fixed_point(inst, log_nu, start(k), opt.max_iterations, opt.tolerance); }, opt.exec);
  std::vector<double> neg(runs.size());
  int iters = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    neg[k] = -runs[k].value;
    iters += runs[k].iterations;
  }
  const std::size_t best = ordered_argmin(neg);

  DeltaResult out;
  out.fixed_point_value = runs[best].value;
  out.value = runs[best].value;
  out.gamma_opt = runs[best].gamma;
  out.iterations = iters;

  if (supp.size() <= 3) {
    std::vector<std::vector<int>> points;
    std::vector<int> cur;
    compositions(opt.grid_resolution, supp.size(), cur, [&](const std::vector<int>& p) { points.push_back(p); });
    const auto gamma_at = [&](std::size_t i) {
      std::vector<double> g(m, 0.0);
      for (std::size_t j = 0; j < supp.size(); ++j)
        g[supp[j]] = static_cast<double>(points[i][j]) / opt.grid_resolution;
      return g;
    };
    const auto vals =
        parallel_map(points.size(), [&](std::size_t i) { return -eval_delta(inst, log_nu, gamma_at(i)).value; }, opt.exec);
    const std::size_t gb = ordered_argmin(vals);
    out.grid_value = -vals[gb];
    if (-vals[gb] > out.value) {
      out.value = -vals[gb];
      out.gamma_opt = gamma_at(gb);
    }
  }
  return out;
}

double delta_variational_value(const DeltaInstance& inst, const Operator& t) {
  if (t.dim() != inst.nu.dim()) throw DimensionError("delta_variational_value: dimension mismatch");
  if (min_eigenvalue(t) <= 0) throw DomainError("delta_variational_value: T must be positive definite");
  const CMatrix log_t = matrix_function(t, ScalarMap::log()).matrix();
  const CMatrix log_nu = matrix_function(inst.nu, ScalarMap::log()).matrix();
  const auto e = inst.channel.expectations(log_t);
  std::vector<double> a(e.size());
  for (std::size_t x = 0; x < e.size(); ++x)
    a[x] = inst.mu[x] > 0 ? std::log(inst.mu[x]) + inst.c * e[x] : -std::numeric_limits<double>::infinity();
  const Operator sum = make_trusted(log_nu + log_t, {inst.nu.dim()});
  const double tr = matrix_function(sum, ScalarMap::exp()).trace();
  return log_sum_exp(a) - inst.c * std::log(tr);
}

Operator delta_induced_test(const DeltaInstance& inst, const std::vector<double>& gamma) {
  const CMatrix sigma = inst.channel.mixture(gamma);
  const CMatrix l = log_floor(sigma) - matrix_function(inst.nu, ScalarMap::log()).matrix();
  return matrix_function(make_trusted((l + l.adjoint()) * 0.5, {inst.nu.dim()}), ScalarMap::exp());
}

ChannelWithPosterior with_posterior(const std::vector<double>& p_x, const std::vector<DensityMatrix>& states,
                                    const StochasticChannel& k) {
  if (static_cast<std::size_t>(k.in_size()) != p_x.size() || states.size() != p_x.size())
    throw DimensionError("with_posterior: alphabet sizes differ");
  ChannelWithPosterior out{k, {}, {}, {}};
  const int nu = k.out_size();
  const auto nx = static_cast<Eigen::Index>(p_x.size());
  out.p_u.assign(static_cast<std::size_t>(nu), 0.0);
  out.p_x_given_u = RMatrix::Zero(nu, nx);
  out.sigma_y_given_u.resize(static_cast<std::size_t>(nu));
  for (int u = 0; u < nu; ++u) {
    double pu = 0;
    for (Eigen::Index x = 0; x < nx; ++x) pu += p_x[static_cast<std::size_t>(x)] * k(static_cast<int>(x), u);
    out.p_u[static_cast<std::size_t>(u)] = pu;
    if (pu <= kDeadMessage) continue;
    CMatrix s = CMatrix::Zero(states[0].dim(), states[0].dim());
    for (Eigen::Index x = 0; x < nx; ++x) {
      const double post = p_x[static_cast<std::size_t>(x)] * k(static_cast<int>(x), u) / pu;
      out.p_x_given_u(u, x) = post;
      if (post > 0) s += post * states[static_cast<std::size_t>(x)].matrix();
    }
    out.sigma_y_given_u[static_cast<std::size_t>(u)] = DensityMatrix::trusted(make_trusted((s + s.adjoint()) * 0.5, {states[0].dim()}));
  }
  return out;
}

namespace {

// Ascent over row-stochastic P(u|x) of
//   F(P) = sum_{x,u} m(x) P(u|x) [c tr rho^x (ln sigma_u - ln nu) - ln(post(x|u) / r(x))].
struct Bottleneck {
  const std::vector<double>& m;
  const std::vector<double>& r;
  const std::vector<DensityMatrix>& states;
  CMatrix log_nu;
  double c;
  int nu_size;

  struct Eval {
    double value;
    RMatrix h;  // h(x,u), +inf where post = 0
    RMatrix e;  // c tr rho^x (ln sigma_u - ln nu)
    std::vector<double> pu;
  };

  Eval eval(const RMatrix& p) const {
    const auto nx = static_cast<Eigen::Index>(m.size());
    const int d = states[0].dim();
    Eval ev{0.0, RMatrix::Constant(nx, nu_size, std::numeric_limits<double>::infinity()), RMatrix::Zero(nx, nu_size),
            std::vector<double>(static_cast<std::size_t>(nu_size), 0.0)};
    for (int u = 0; u < nu_size; ++u) {
      double pu = 0;
      for (Eigen::Index x = 0; x < nx; ++x) pu += m[static_cast<std::size_t>(x)] * p(x, u);
      ev.pu[static_cast<std::size_t>(u)] = pu;
      if (pu <= kDeadMessage) continue;
      CMatrix s = CMatrix::Zero(d, d);
      for (Eigen::Index x = 0; x < nx; ++x) {
        const double w = m[static_cast<std::size_t>(x)] * p(x, u) / pu;
        if (w > 0) s += w * states[static_cast<std::size_t>(x)].matrix();
      }
      const CMatrix l = log_floor(s) - log_nu;
      for (Eigen::Index x = 0; x < nx; ++x) {
        const double e = (states[static_cast<std::size_t>(x)].matrix().cwiseProduct(l.transpose())).sum().real();
        ev.e(x, u) = c * e;
        const double post = m[static_cast<std::size_t>(x)] * p(x, u) / pu;
        if (post > 0) {
          ev.h(x, u) = c * e - std::log(post / r[static_cast<std::size_t>(x)]);
          ev.value += m[static_cast<std::size_t>(x)] * p(x, u) * ev.h(x, u);
        }
      }
    }
    return ev;
  }

  // P_new(u|x) ∝ P^{1-s} (P_U r / m)^s e^{s c tr rho^x (ln sigma_u - ln nu)}
  RMatrix step(const RMatrix& p, const Eval& ev, double s) const {
    const auto nx = static_cast<Eigen::Index>(m.size());
    const RMatrix& e = ev.e;
    const std::vector<double>& pu = ev.pu;
    RMatrix out = p;
    const double ninf = -std::numeric_limits<double>::infinity();
    for (Eigen::Index x = 0; x < nx; ++x) {
      if (m[static_cast<std::size_t>(x)] <= 0) continue;
      std::vector<double> lg(static_cast<std::size_t>(nu_size), ninf);
      for (int u = 0; u < nu_size; ++u) {
        const double puu = pu[static_cast<std::size_t>(u)];
        if (puu <= kDeadMessage) continue;
        const double target =
            std::log(puu) + std::log(r[static_cast<std::size_t>(x)]) - std::log(m[static_cast<std::size_t>(x)]) + e(x, u);
        if (s >= 1.0)
          lg[static_cast<std::size_t>(u)] = target;
        else if (p(x, u) > 0)
          lg[static_cast<std::size_t>(u)] = (1.0 - s) * std::log(p(x, u)) + s * target;
      }
      const double z = log_sum_exp(lg);
      if (!std::isfinite(z)) continue;
      for (int u = 0; u < nu_size; ++u) out(x, u) = std::exp(lg[static_cast<std::size_t>(u)] - z);
    }
    return out;
  }

  double kkt(const RMatrix& p, const RMatrix& h) const {
    double worst = 0;
    for (Eigen::Index x = 0; x < p.rows(); ++x) {
      if (m[static_cast<std::size_t>(x)] <= 0) continue;
      double mean = 0;
      for (int u = 0; u < nu_size; ++u)
        if (p(x, u) > 0) mean += p(x, u) * h(x, u);
      double dev = 0;
      for (int u = 0; u < nu_size; ++u)
        if (p(x, u) > 0) dev += p(x, u) * std::abs(h(x, u) - mean);
      worst = std::max(worst, dev);
    }
    return worst;
  }
};

struct AscentRun {
  double value;
  RMatrix p;
  double kkt;
  int iterations;
};

AscentRun ascend(const Bottleneck& b, RMatrix p, int max_it, double kkt_tol) {
  auto cur = b.eval(p);
  double s = 1.0;
  int it = 0;
  int stagnant = 0;
  double res = b.kkt(p, cur.h);
  for (; it < max_it && res >= kkt_tol; ++it) {
    RMatrix cand = b.step(p, cur, s);
    auto ce = b.eval(cand);
    if (ce.value >= cur.value - 1e-15) {
      stagnant = ce.value - cur.value < 1e-14 ? stagnant + 1 : 0;
      p = std::move(cand);
      cur = std::move(ce);
      res = b.kkt(p, cur.h);
      s = std::min(1.0, 2.0 * s);
      if (stagnant >= 25) break;
    } else {
      s *= 0.5;
      if (s < 1e-10) break;
    }
  }
  return {cur.value, std::move(p), res, it};
}

RMatrix initial_kernel(std::size_t k, int nx, int nu, std::uint64_t seed) {
  RMatrix p = RMatrix::Zero(nx, nu);
  if (k == 0) {
    for (int x = 0; x < nx; ++x) {
      p.row(x).setConstant(0.1 / nu);
      p(x, x % nu) += 0.9;
    }
    return p;
  }
  if (k == 1) {
    p.setConstant(1.0 / nu);
    return p;
  }
  Rng rng(mix_seed(seed, k));
  if (k < 18) {
    for (int x = 0; x < nx; ++x) p(x, uniform_int(rng, 0, nu - 1)) = 1.0;
    return p;
  }
  for (int x = 0; x < nx; ++x) {
    const auto d = random_dirichlet(nu, rng);
    for (int u = 0; u < nu; ++u) p(x, u) = d[static_cast<std::size_t>(u)];
  }
  return p;
}

DeltaStarResult bottleneck_sup(const std::vector<double>& m, const std::vector<double>& r,
                               const std::vector<DensityMatrix>& states, const Operator& nu, double c, int u_size,
                               const DeltaStarOptions& opt) {
  if (u_size < 1) throw DomainError("Delta*: u_size must be >= 1");
  if (!(c > 0)) throw DomainError("Delta*: c must be positive");
  if (m.size() != states.size() || r.size() != states.size() || states.empty())
    throw DimensionError("Delta*: distribution and state family differ in length");
  if (nu.dim() != states[0].dim()) throw DimensionError("Delta*: nu dimension mismatch");
  if (min_eigenvalue(nu) < 1e-10) throw ValidationError("Delta*: nu must have min eigenvalue >= 1e-10");
  const Bottleneck b{m, r, states, matrix_function(nu, ScalarMap::log()).matrix(), c, u_size};
  const int nx = static_cast<int>(m.size());

  const auto runs = parallel_map(
      static_cast<std::size_t>(std::max(1, opt.starts)),
      [&](std::size_t k) { return ascend(b, initial_kernel(k, nx, u_size, opt.seed), opt.max_iterations, opt.kkt_tolerance); },
      opt.exec);
  std::vector<double> neg(runs.size());
  int iters = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    neg[k] = -runs[k].value;
    iters += runs[k].iterations;
  }
  const auto& best = runs[ordered_argmin(neg)];

  RMatrix kernel = best.p;
  for (Eigen::Index x = 0; x < kernel.rows(); ++x) kernel.row(x) /= kernel.row(x).sum();
  DeltaStarResult out;
  out.value = best.value;
  out.kkt_residual = best.kkt;
  out.iterations = iters;
  out.best = with_posterior(m, states, StochasticChannel(kernel));

  // c I(U;Y) - I(U;X) of the same kernel
  CMatrix avg = CMatrix::Zero(states[0].dim(), states[0].dim());
  double cond = 0;
  std::vector<std::vector<double>> joint(m.size(), std::vector<double>(static_cast<std::size_t>(u_size)));
  for (int u = 0; u < u_size; ++u) {
    const auto& su = out.best.sigma_y_given_u[static_cast<std::size_t>(u)];
    if (!su) continue;
    avg += out.best.p_u[static_cast<std::size_t>(u)] * su->matrix();
    cond += out.best.p_u[static_cast<std::size_t>(u)] * von_neumann_entropy(*su).nats;
  }
  for (std::size_t x = 0; x < m.size(); ++x)
    for (int u = 0; u < u_size; ++u) joint[x][static_cast<std::size_t>(u)] = m[x] * kernel(static_cast<Eigen::Index>(x), u);
  const DensityMatrix y = DensityMatrix::trusted(make_trusted((avg + avg.adjoint()) * 0.5, {states[0].dim()}));
  out.mi_form = c * (von_neumann_entropy(y).nats - cond) - classical_mutual_information(joint);
  out.forms_gap = std::abs(out.value - out.mi_form);
  return out;
}

}  // namespace

DeltaStarResult delta_star(const std::vector<double>& q, const std::vector<DensityMatrix>& states, const Operator& nu,
                           double c, int u_size, const DeltaStarOptions& opt) {
  return bottleneck_sup(q, q, states, nu, c, u_size, opt);
}

DeltaStarResult phi(const std::vector<double>& p_tilde, const std::vector<double>& q,
                    const std::vector<DensityMatrix>& states, const DensityMatrix& rho_y, double c, int u_size,
                    const DeltaStarOptions& opt) {
  double s = 0;
  for (double v : p_tilde) {
    if (!(v >= 0)) throw ValidationError("phi: p_tilde has a negative entry");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-10) throw ValidationError("phi: p_tilde does not sum to 1");
  return bottleneck_sup(p_tilde, q, states, rho_y.op(), c, u_size, opt);
}

InequalityMargin continuity_margin(const std::vector<double>& p_tilde, const std::vector<double>& q,
                                   const std::vector<DensityMatrix>& states, const DensityMatrix& rho_y, double c,
                                   double eps, int u_size, const DeltaStarOptions& opt) {
  if (!(eps > 0 && eps < 1)) throw DomainError("continuity_margin: eps must lie in (0,1)");
  if (p_tilde.size() != q.size()) throw DimensionError("continuity_margin: length mismatch");
  for (std::size_t x = 0; x < q.size(); ++x)
    if (p_tilde[x] > (1.0 + eps) * q[x] + 1e-12) {
      std::ostringstream os;
      os << "continuity_margin: p_tilde[" << x << "] = " << p_tilde[x] << " exceeds (1+eps) q";
      throw PreconditionError(os.str());
    }
  const double eta = 1.0 / *std::min_element(q.begin(), q.end());
  const double at_q = phi(q, q, states, rho_y, c, u_size, opt).value;
  const double at_p = phi(p_tilde, q, states, rho_y, c, u_size, opt).value;
  std::ostringstream digest;
  digest << "c=" << c << " eps=" << eps << " |U|=" << u_size;
  return InequalityMargin::of(at_q + (c + 1.0) * std::log(eta) * eps, at_p, digest.str());
}

double typical_eps(double eta, std::size_t alphabet, int n, double delta) {
  return std::sqrt(3.0 * eta / n * std::log(static_cast<double>(alphabet) / delta));
}

TypicalSet typical_set(const std::vector<double>& q, int n, double delta, const Limits& limits) {
  if (!(delta > 0 && delta < 1)) throw DomainError("typical_set: delta must lie in (0,1)");
  if (q.empty()) throw DimensionError("typical_set: empty alphabet");
  const double eta = 1.0 / *std::min_element(q.begin(), q.end());
  const double threshold = 3.0 * eta * std::log(static_cast<double>(q.size()) / delta);
  if (!(n > threshold)) {
    std::ostringstream os;
    os << "typical_set: n = " << n << " must exceed 3 eta ln(|X|/delta) = " << threshold;
    throw PreconditionError(os.str());
  }
  const double total = std::pow(static_cast<double>(q.size()), n);
  if (total > static_cast<double>(limits.max_enumeration)) {
    std::ostringstream os;
    os << "typical_set: |X|^n = " << total << " exceeds the enumeration cap " << limits.max_enumeration;
    throw ResourceError(os.str());
  }
  TypicalSet ts;
  ts.n = n;
  ts.delta = delta;
  ts.eps_n = typical_eps(eta, q.size(), n, delta);
  const auto count = static_cast<std::size_t>(total);
  ts.mu_n.assign(count, 0.0);
  std::vector<int> hist(q.size());
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::fill(hist.begin(), hist.end(), 0);
    std::size_t v = idx;
    double p = 1;
    for (int i = 0; i < n; ++i) {
      const std::size_t a = v % q.size();
      v /= q.size();
      ++hist[a];
      p *= q[a];
    }
    bool ok = true;
    for (std::size_t a = 0; a < q.size() && ok; ++a) ok = hist[a] <= (1.0 + ts.eps_n) * q[a] * n + 1e-12;
    if (!ok) continue;
    ts.members.push_back(idx);
    ts.mu_n[idx] = p;
    ts.mass += p;
  }
  return ts;
}

SingleLetterGap single_letter_gap(const CQSource& src, double c, int n, double delta, int u_size,
                                  const DeltaOptions& dopt, const DeltaStarOptions& sopt) {
  if (src.sites() != 1) throw DomainError("single_letter_gap: source must be single-letter");
  if (std::pow(static_cast<double>(src.size()), n) > 256.0)
    throw ResourceError("single_letter_gap: |X|^n exceeds 256");
  const TypicalSet ts = typical_set(src.q(), n, delta);
  const DeltaInstance inst(ts.mu_n, src.channel().power(n), tensor_power(src.rho_y().op(), n), c);

  SingleLetterGap out;
  out.delta_n = qsc::delta(inst, dopt);
  out.delta_star_1 = delta_star(src.q(), src.channel().letter_states(), src.rho_y().op(), c, u_size, sopt);
  const double eta = src.eta();
  out.report.name = "single_letter_gap";
  out.report.first_order = n * out.delta_star_1.value;
  out.report.second_order =
      (c + 1.0) * std::log(eta) * std::sqrt(3.0 * n * eta * std::log(static_cast<double>(src.size()) / delta));
  out.report.third_order = 0.0;
  out.report.constants["eta"] = eta;
  out.report.constants["c"] = c;
  out.report.constants["n"] = n;
  out.report.constants["delta"] = delta;
  out.report.constants["eps_n"] = ts.eps_n;
  out.report.constants["typical_mass"] = ts.mass;
  out.report.constants["delta_star"] = out.delta_star_1.value;
  out.report.constants["delta_n"] = out.delta_n.value;
  out.report.finalize();
  out.margin = InequalityMargin::of(out.report.total, out.delta_n.value, "single_letter_gap");
  out.report.constants["margin"] = out.margin.margin;
  return out;
}

}  // namespace qsc
