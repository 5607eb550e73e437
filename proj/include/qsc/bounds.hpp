#pragma once

// Converse-bound evaluators: the encoded relative-entropy estimate of theta_n,
// the Stein objective, the second-order strong converse, the key inequality,
// the image-size bounds and the source-coding bound.

#include <utility>
#include <vector>

#include "qsc/bottleneck.hpp"
#include "qsc/hypothesis.hpp"
#include "qsc/report.hpp"

namespace qsc {

struct ThetaEstimate {
  double value = 0.0;  // (1/n) max_f D(sigma_{W Y^n} || sigma~_{W Y^n})
  StochasticChannel encoder = StochasticChannel::constant(1);
  std::size_t encoders = 0;
};

// Lower estimate of theta_n(r1, infinity) over deterministic encoders X^n -> W,
// |W| = max(1, floor(e^{n r1})). The alternative shares Q_X and uses alt_states.
// Only r2 = infinity is supported; r2_infinite = false raises PreconditionError.
ThetaEstimate theta_n_lower(const CQSource& src0, const std::vector<DensityMatrix>& alt_states, int n, double r1,
                            bool r2_infinite = true, Execution exec = Execution::parallel, const Limits& limits = {});

struct SteinObjective {
  double i_uy = 0.0;
  double i_ux = 0.0;
};

// I(U;Y) and I(U;X') of omega_{UXY} = (N^{X->U} (x) id) rho_{XXY}.
SteinObjective stein_independence_objective(const CQSource& src, const StochasticChannel& chan);

struct ConstrainedSup {
  double value = 0.0;
  double c_opt = 0.0;  // +infinity when the c -> infinity endpoint wins
  std::vector<std::pair<double, double>> lagrangian_curve;  // (c, (Delta*(c) + r)/c)
  double mutual_information = 0.0;                          // I(X;Y), the c -> infinity value
};

// inf_{c >= 1} (1/c)(Delta*(Q, Lambda, rho_Y, c) + r): the sup of I(U;Y) over
// I(U;X) <= r. Grid c in {1, 1.25, ..., 16}, golden-section refinement in 1/c,
// and the c -> infinity endpoint I(X;Y).
ConstrainedSup bottleneck_sup_constrained(const CQSource& src, double r, int u_size,
                                          const DeltaStarOptions& opt = {});

// lhs = (tr[rho_Y^n Psi_t^n(T_n)])^c e^{Delta(mu_n, Lambda^n, rho_Y^n, c)},
// rhs = sum_{x^n} mu_n(x^n) (tr[rho^{x^n} T_n])^{c(1+1/t)}.
InequalityMargin verify_key_inequality(const std::vector<double>& mu_n, const CQSource& src, const Operator& t_n,
                                       double c, double t, const DeltaOptions& opt = {});

// 2 ln(gamma eta) sqrt(3 eta ln(4|X|/(1-eps))) + 2 sqrt(2 gamma ln(4/(1-eps)))
double k_eps(double gamma, double eta, std::size_t alphabet, double eps);
// ln(gamma^c eta^{c+1}) sqrt(3 eta ln(|X|/eps)) + 2c sqrt((gamma-1) ln(1/delta))
double a_constant(double gamma, double eta, std::size_t alphabet, double c, double eps, double delta);
// 2 ln(|Y| eta) sqrt(3 eta ln(4|X|/(1-eps))) + 2 sqrt(|Y| ln(2/(1-eps)))
double k_source(int y_dim, double eta, std::size_t alphabet, double eps);

// 3 eta ln(4|X|/(1-eps))
double stein_threshold(double eta, std::size_t alphabet, double eps);

struct SteinBoundOptions {
  bool enforce_threshold = true;
  DeltaStarOptions delta_star;
};

// first = bottleneck_sup_constrained, second = K_eps/sqrt(n), third = (2/n) ln(4/(1-eps)).
BoundReport sc_bound_stein(const CQSource& src, double r, double eps, int n, int u_size,
                           const SteinBoundOptions& opt = {});

// lhs = Delta(mu_n, Lambda^n, sigma^n, c) + 2c sqrt(ln(1/delta)) sqrt(n(gamma-1)) + c ln(1/delta),
// rhs = ln P_{mu_n}(tr[rho^{X^n} T_n] >= delta) - c ln tr[sigma^n T_n], gamma relative to sigma.
InequalityMargin image_size_bound_i(const std::vector<double>& mu_n, const CQSource& src, const DensityMatrix& sigma,
                                    const Operator& t_n, double c, double delta, const DeltaOptions& opt = {});

// first = n Delta*(Q, Lambda, sigma, c), second = A sqrt(n), third = c ln(1/delta).
BoundReport image_size_bound_ii(const CQSource& src, const DensityMatrix& sigma, double c, double delta, double eps,
                                int n, int u_size, const DeltaStarOptions& opt = {});

// Lower bound on (1/n) ln|W_2|: first = inf {H(Y|U) : I(U;X) <= log_w1},
// second = -K'/sqrt(n), third = -(2/n) ln(4/(1-eps)).
BoundReport source_coding_bound(const CQSource& src, double eps, int n, double log_w1, int u_size,
                                const DeltaStarOptions& opt = {});

struct FqPoint {
  bool feasible = false;
  double value = 0.0;  // 2 H(Y) - I(U;Y)
  double i_ux = 0.0;
  double i_uy = 0.0;
};

FqPoint fq_point(const CQSource& src, const StochasticChannel& chan, double r_budget);

}  // namespace qsc
