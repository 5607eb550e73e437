#include "qsc/semigroup.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qsc/errors.hpp"

namespace qsc {

namespace {

double trace_abs_power(const CMatrix& m, double p) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((m + m.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  double s = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = std::abs(es.eigenvalues()[i]);
    if (v > 0) s += std::pow(v, p);
  }
  return s;
}

DensityMatrix tensor_states(std::span<const DensityMatrix> states) {
  if (states.empty()) throw DimensionError("need at least one site state");
  std::vector<Operator> ops;
  ops.reserve(states.size());
  for (const auto& s : states) ops.push_back(s.op());
  return DensityMatrix::trusted(tensor(std::span<const Operator>(ops)));
}

void check_time(double t) {
  if (!(t >= 0)) throw DomainError("semigroup time must be nonnegative");
}

}  // namespace

SemigroupSpec::SemigroupSpec(DensityMatrix sigma) : invariant_state(std::move(sigma)) {
  if (invariant_state.min_eig() < 1e-8)
    throw ValidationError("semigroup invariant state must have min eigenvalue >= 1e-8");
}

double weighted_lp_norm(const Operator& x, double p, const DensityMatrix& sigma) {
  if (p == 0.0) throw DomainError("weighted_lp_norm: p = 0 is undefined");
  if (x.dim() != sigma.dim()) throw DimensionError("weighted_lp_norm: dimension mismatch");
  const Spectrum ss = eig_hermitian(sigma.op());
  if (ss.values.minCoeff() <= tol::support) throw DomainError("weighted_lp_norm: sigma must be full rank");
  const Spectrum xs = eig_hermitian(x);
  if (p > 0) {
    if (xs.values.minCoeff() < -tol::eig_clip) throw DomainError("weighted_lp_norm: X must be PSD");
    const CMatrix w = ss.map([p](double v) { return std::pow(v, 1.0 / (2.0 * p)); });
    return std::pow(trace_abs_power(w * x.matrix() * w, p), 1.0 / p);
  }
  if (xs.values.minCoeff() <= tol::support)
    throw DomainError("weighted_lp_norm: p < 0 needs X > 0 (smallest eigenvalue above 1e-12)");
  const CMatrix w = ss.map([p](double v) { return std::pow(v, -1.0 / (2.0 * p)); });
  const CMatrix xinv = xs.map([](double v) { return 1.0 / v; });
  return std::pow(trace_abs_power(w * xinv * w, -p), 1.0 / p);
}

Operator depolarize_heisenberg(const Operator& x, double t, const SemigroupSpec& spec) {
  check_time(t);
  if (x.dim() != spec.invariant_state.dim()) throw DimensionError("depolarize: dimension mismatch");
  const double e = std::exp(-t);
  const double m = spec.invariant_state.op().trace_product(x);
  CMatrix out = e * x.matrix();
  out.diagonal().array() += (1.0 - e) * m;
  return make_trusted(std::move(out), x.subsystem_dims());
}

DensityMatrix depolarize_schrodinger(const DensityMatrix& rho, double t, const SemigroupSpec& spec) {
  check_time(t);
  if (rho.dim() != spec.invariant_state.dim()) throw DimensionError("depolarize: dimension mismatch");
  const double e = std::exp(-t);
  return DensityMatrix::trusted(
      make_trusted(e * rho.matrix() + (1.0 - e) * spec.invariant_state.matrix(), rho.op().subsystem_dims()));
}

Operator site_affine(const Operator& x, int site, const Operator& sigma, double a, double b) {
  const auto& dims = x.subsystem_dims();
  if (site < 0 || site >= x.num_subsystems()) throw DimensionError("site index out of range");
  const int dk = dims[static_cast<std::size_t>(site)];
  if (sigma.dim() != dk) throw DimensionError("site state dimension mismatch");
  long long stride = 1;
  for (std::size_t s = static_cast<std::size_t>(site) + 1; s < dims.size(); ++s) stride *= dims[s];
  const int d = x.dim();
  const CMatrix& xm = x.matrix();
  const CMatrix& sm = sigma.matrix();
  CMatrix out = a * xm;
  // base indices: those whose digit at `site` is zero
  std::vector<int> base;
  for (int r = 0; r < d; ++r)
    if ((r / stride) % dk == 0) base.push_back(r);
  for (int c0 : base)
    for (int r0 : base) {
      cplx red = 0;
      for (int i = 0; i < dk; ++i)
        for (int j = 0; j < dk; ++j) red += sm(j, i) * xm(r0 + i * stride, c0 + j * stride);
      red *= b;
      for (int i = 0; i < dk; ++i) out(r0 + i * stride, c0 + i * stride) += red;
    }
  return make_trusted(std::move(out), dims);
}

Operator tensor_depolarize(const Operator& xn, double t, std::span<const DensityMatrix> site_states) {
  check_time(t);
  if (static_cast<int>(site_states.size()) != xn.num_subsystems())
    throw DimensionError("tensor_depolarize: number of site states differs from number of subsystems");
  const double e = std::exp(-t);
  Operator y = xn;
  for (std::size_t k = 0; k < site_states.size(); ++k) {
    if (site_states[k].dim() != xn.subsystem_dims()[k]) throw DimensionError("tensor_depolarize: site dim mismatch");
    y = site_affine(y, static_cast<int>(k), site_states[k].op(), e, 1.0 - e);
  }
  return y;
}

Operator psi_map(const Operator& t_op, double t, double gamma, const DensityMatrix& rho_y) {
  check_time(t);
  if (gamma < 1.0) throw DomainError("psi_map: gamma must be >= 1");
  if (t_op.dim() != rho_y.dim()) throw DimensionError("psi_map: dimension mismatch");
  const double e = std::exp(-t);
  CMatrix out = e * t_op.matrix();
  out.diagonal().array() += gamma * (1.0 - e) * rho_y.op().trace_product(t_op);
  return make_trusted(std::move(out), t_op.subsystem_dims());
}

Operator tensor_psi(const Operator& t_n, double t, double gamma, const DensityMatrix& rho_y) {
  check_time(t);
  if (gamma < 1.0) throw DomainError("psi_map: gamma must be >= 1");
  const double e = std::exp(-t);
  Operator y = t_n;
  for (int k = 0; k < t_n.num_subsystems(); ++k) y = site_affine(y, k, rho_y.op(), e, gamma * (1.0 - e));
  return y;
}

double rhc_time_threshold(double p, double q) {
  if (!(p <= q && q < 1)) throw DomainError("rhc threshold needs p <= q < 1");
  return std::log((p - 1.0) / (q - 1.0));
}

InequalityMargin check_rhc(const Operator& g_n, std::span<const DensityMatrix> site_states, double p, double q,
                           double t) {
  const double thr = rhc_time_threshold(p, q);
  if (t < thr - 1e-12) {
    std::ostringstream os;
    os << "check_rhc: t = " << t << " below the hypercontractive time " << thr;
    throw PreconditionError(os.str());
  }
  const DensityMatrix sigma = tensor_states(site_states);
  const Operator g = g_n.with_dims(sigma.op().subsystem_dims());
  const Operator phi = tensor_depolarize(g, t, site_states);
  std::ostringstream digest;
  digest << "p=" << p << " q=" << q << " t=" << t << " n=" << site_states.size();
  return InequalityMargin::of(weighted_lp_norm(phi, p, sigma), weighted_lp_norm(g, q, sigma), digest.str());
}

InequalityMargin check_alt(const Operator& a, const Operator& b, double r) {
  if (!(r >= 0 && r <= 1)) throw DomainError("check_alt: r must lie in [0,1]");
  if (a.dim() != b.dim()) throw DimensionError("check_alt: dimension mismatch");
  const Spectrum bs = eig_hermitian(b);
  const CMatrix bh = bs.map([](double v) { return v > tol::support ? std::sqrt(v) : 0.0; });
  const CMatrix br = bs.map([r](double v) { return v > tol::support ? std::pow(v, r / 2.0) : 0.0; });
  const Operator ar = matrix_function(a, ScalarMap::power(r));
  const Operator inner = make_trusted(bh * a.matrix() * bh, {a.dim()});
  const double lhs = matrix_function(inner, ScalarMap::power(r)).trace();
  const double rhs = (br * ar.matrix() * br).trace().real();
  return InequalityMargin::of(lhs, rhs);
}

InequalityMargin check_reverse_holder(const Operator& a, const Operator& b, double p, const DensityMatrix& sigma) {
  if (p == 0.0 || !(p < 1)) throw DomainError("check_reverse_holder: p must be < 1 and nonzero");
  if (min_eigenvalue(b) <= tol::support) throw DomainError("check_reverse_holder: B must be positive definite");
  const double phat = 1.0 / (1.0 - 1.0 / p);
  const Operator sh = matrix_function(sigma.op(), ScalarMap::power(0.5));
  const double lhs = (sh.matrix() * a.matrix() * sh.matrix() * b.matrix()).trace().real();
  const double rhs = weighted_lp_norm(a, p, sigma) * weighted_lp_norm(b, phat, sigma);
  return InequalityMargin::of(lhs, rhs);
}

InequalityMargin check_reverse_alt(const Operator& a, const Operator& b, double r, double a_exp, double b_exp) {
  if (!(r > 0 && r <= 1)) throw DomainError("check_reverse_alt: r must lie in (0,1]");
  const auto inv = [](double v) { return std::isinf(v) ? 0.0 : 1.0 / v; };
  if (!(a_exp > 0) || !(b_exp > 0)) throw PreconditionError("check_reverse_alt: a, b must be positive");
  const double gap = 1.0 / (2.0 * r) - (0.5 + inv(a_exp) + inv(b_exp));
  if (std::abs(gap) > 1e-12) throw PreconditionError("check_reverse_alt: 1/(2r) != 1/2 + 1/a + 1/b");
  if (a.dim() != b.dim()) throw DimensionError("check_reverse_alt: dimension mismatch");

  const Spectrum bs = eig_hermitian(b);
  const CMatrix br = bs.map([r](double v) { return v > tol::support ? std::pow(v, r / 2.0) : 0.0; });
  const CMatrix bh = bs.map([](double v) { return v > tol::support ? std::sqrt(v) : 0.0; });
  const Operator ar = matrix_function(a, ScalarMap::power(r));
  const double sandwich = std::max(0.0, (br * ar.matrix() * br).trace().real());
  const double na = schatten_norm(matrix_function(a, ScalarMap::power((1.0 - r) / 2.0)), a_exp);
  const double nb = schatten_norm(matrix_function(b, ScalarMap::power((1.0 - r) / 2.0)), b_exp);
  const double lhs = std::pow(sandwich, r) * std::pow(na, 2.0 * r) * std::pow(nb, 2.0 * r);
  const Operator inner = make_trusted(bh * a.matrix() * bh, {a.dim()});
  const double rhs = matrix_function(inner, ScalarMap::power(r)).trace();
  return InequalityMargin::of(lhs, rhs);
}

}  // namespace qsc
