#pragma once

// Depolarizing semigroups, weighted L_p pseudo-norms and the functional
// inequality verifiers built on them.

#include <span>
#include <vector>

#include "qsc/linalg.hpp"
#include "qsc/report.hpp"

namespace qsc {

struct SemigroupSpec {
  DensityMatrix invariant_state;
  double mlsi_lower_bound = 0.25;

  explicit SemigroupSpec(DensityMatrix sigma);
};

// (tr |sigma^{1/2p} X sigma^{1/2p}|^p)^{1/p}; for p < 0 the inverse form
// (tr |sigma^{-1/2p} X^{-1} sigma^{-1/2p}|^{-p})^{1/p}, which needs X > 0.
double weighted_lp_norm(const Operator& x, double p, const DensityMatrix& sigma);

// e^{-t} X + (1 - e^{-t}) tr(sigma X) 1
Operator depolarize_heisenberg(const Operator& x, double t, const SemigroupSpec& spec);
// e^{-t} rho + (1 - e^{-t}) sigma
DensityMatrix depolarize_schrodinger(const DensityMatrix& rho, double t, const SemigroupSpec& spec);

// X -> a X + b (1_k (x) tr_k[(sigma (x) 1) X]) on subsystem k.
Operator site_affine(const Operator& x, int site, const Operator& sigma, double a, double b);

// (x)_i Phi_{t, sigma_i} applied site by site.
Operator tensor_depolarize(const Operator& xn, double t, std::span<const DensityMatrix> site_states);

// e^{-t} T + gamma (1 - e^{-t}) tr(rho_Y T) 1
Operator psi_map(const Operator& t_op, double t, double gamma, const DensityMatrix& rho_y);
// Psi_t applied to every site of T_n.
Operator tensor_psi(const Operator& t_n, double t, double gamma, const DensityMatrix& rho_y);

// ln((p-1)/(q-1))
double rhc_time_threshold(double p, double q);

// lhs = ||Phi_{t,x^n}(G)||_{p, (x) sigma_i}, rhs = ||G||_{q, (x) sigma_i}.
InequalityMargin check_rhc(const Operator& g_n, std::span<const DensityMatrix> site_states, double p, double q,
                           double t);

// lhs = tr[(B^1/2 A B^1/2)^r], rhs = tr[B^{r/2} A^r B^{r/2}].
InequalityMargin check_alt(const Operator& a, const Operator& b, double r);

// lhs = tr[sigma^1/2 A sigma^1/2 B], rhs = ||A||_{p,sigma} ||B||_{phat,sigma}, phat = 1/(1 - 1/p).
InequalityMargin check_reverse_holder(const Operator& a, const Operator& b, double p, const DensityMatrix& sigma);

// lhs = (tr B^{r/2} A^r B^{r/2})^r ||A^{(1-r)/2}||_a^{2r} ||B^{(1-r)/2}||_b^{2r},
// rhs = tr[(B^1/2 A B^1/2)^r]. a, b may be +infinity.
InequalityMargin check_reverse_alt(const Operator& a, const Operator& b, double r, double a_exp, double b_exp);

}  // namespace qsc
