#pragma once

// The bottleneck functionals Delta and Delta*, the perturbed functional phi,
// typical sets and the single-letterization gap.

#include <cstdint>
#include <optional>
#include <vector>

#include "qsc/channel.hpp"
#include "qsc/hypothesis.hpp"
#include "qsc/linalg.hpp"
#include "qsc/parallel.hpp"
#include "qsc/report.hpp"

namespace qsc {

// mu is a nonnegative measure on the channel inputs (total mass <= 1 is not
// enforced); nu is the reference output operator, full rank.
struct DeltaInstance {
  std::vector<double> mu;
  CQChannel channel;
  Operator nu;
  double c = 1.0;

  DeltaInstance(std::vector<double> mu, CQChannel channel, Operator nu, double c);
};

struct DeltaResult {
  double value = 0.0;
  std::vector<double> gamma_opt;
  double fixed_point_value = 0.0;
  std::optional<double> grid_value;  // only when |supp mu| <= 3
  int iterations = 0;                // summed over starts
};

struct DeltaOptions {
  int starts = 32;
  int max_iterations = 500;
  double tolerance = 1e-10;
  int grid_resolution = 64;
  std::uint64_t seed = 0x5eed;
  Execution exec = Execution::parallel;
};

// c D(sigma_gamma || nu) - D(gamma || mu) for a probability vector gamma.
double delta_objective(const DeltaInstance& inst, const std::vector<double>& gamma);

// max over gamma of delta_objective: fixed-point ascent from several starts,
// cross-checked by a simplex grid when the support of mu has at most 3 points.
DeltaResult delta(const DeltaInstance& inst, const DeltaOptions& opt = {});

// ln sum_x mu(x) e^{c tr[rho^x ln T]} - c ln tr e^{ln nu + ln T}, T > 0.
double delta_variational_value(const DeltaInstance& inst, const Operator& t);

// e^{ln sigma_gamma - ln nu}, the maximizer of the variational value at gamma.
Operator delta_induced_test(const DeltaInstance& inst, const std::vector<double>& gamma);

struct ChannelWithPosterior {
  StochasticChannel p_u_given_x = StochasticChannel::constant(1);
  std::vector<double> p_u;
  RMatrix p_x_given_u;  // row u; zero rows where p_u(u) <= 1e-14
  std::vector<std::optional<DensityMatrix>> sigma_y_given_u;
};

// Builds p_u, posteriors and sigma_{Y|U} from an input measure and a kernel.
ChannelWithPosterior with_posterior(const std::vector<double>& p_x, const std::vector<DensityMatrix>& states,
                                    const StochasticChannel& p_u_given_x);

struct DeltaStarResult {
  double value = 0.0;     // conditional-divergence form
  double mi_form = 0.0;   // c I(U;Y) - I(U;X) of the optimizer
  double forms_gap = 0.0; // |value - mi_form|, meaningful when nu = rho_Y and p = q
  ChannelWithPosterior best;
  double kkt_residual = 0.0;
  int iterations = 0;
};

struct DeltaStarOptions {
  int starts = 64;
  int max_iterations = 2000;
  double kkt_tolerance = 1e-8;
  std::uint64_t seed = 0xd5a7;
  Execution exec = Execution::parallel;
};

// sup over P_{U|X} with |U| = u_size of c D(sigma_{Y|U} || nu | P_U) - D(P_{X|U} || q | P_U).
DeltaStarResult delta_star(const std::vector<double>& q, const std::vector<DensityMatrix>& states, const Operator& nu,
                           double c, int u_size, const DeltaStarOptions& opt = {});

// Same supremum with the joint built from p_tilde and the penalty referenced to q.
DeltaStarResult phi(const std::vector<double>& p_tilde, const std::vector<double>& q,
                    const std::vector<DensityMatrix>& states, const DensityMatrix& rho_y, double c, int u_size,
                    const DeltaStarOptions& opt = {});

// lhs = phi(q) + (c+1) ln(eta) eps, rhs = phi(p_tilde); needs p_tilde <= (1+eps) q.
InequalityMargin continuity_margin(const std::vector<double>& p_tilde, const std::vector<double>& q,
                                   const std::vector<DensityMatrix>& states, const DensityMatrix& rho_y, double c,
                                   double eps, int u_size, const DeltaStarOptions& opt = {});

struct TypicalSet {
  int n = 0;
  double delta = 0.0;
  double eps_n = 0.0;
  std::vector<std::size_t> members;  // indices into X^n, ascending
  std::vector<double> mu_n;          // Q^n restricted to the members, over all of X^n
  double mass = 0.0;
};

// sqrt((3 eta / n) ln(|X| / delta))
double typical_eps(double eta, std::size_t alphabet, int n, double delta);

TypicalSet typical_set(const std::vector<double>& q, int n, double delta, const Limits& limits = {});

struct SingleLetterGap {
  BoundReport report;  // first = n Delta*, second = (c+1) ln(eta) sqrt(3 n eta ln(|X|/delta))
  InequalityMargin margin;  // lhs = report.total, rhs = Delta over the typical set
  DeltaResult delta_n;
  DeltaStarResult delta_star_1;
};

// Delta(mu_n, Lambda^n, rho_Y^n, c) against n Delta*(Q, Lambda, rho_Y, c) plus the
// continuity penalty. |X|^n is capped at 256.
SingleLetterGap single_letter_gap(const CQSource& src, double c, int n, double delta, int u_size,
                                  const DeltaOptions& dopt = {}, const DeltaStarOptions& sopt = {});

}  // namespace qsc
