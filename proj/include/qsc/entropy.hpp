#pragma once

// Entropic functionals. Everything is computed in nats; bits are derived.

#include <span>
#include <vector>

#include "qsc/linalg.hpp"

namespace qsc {

struct EntropyValue {
  double nats = 0.0;
  double bits = 0.0;

  static EntropyValue from_nats(double v);
  bool is_infinite() const;
};

inline constexpr double kLn2 = 0.69314718055994530942;

// -sum x ln x over entries > tol::support
double spectral_entropy(const RVector& eigenvalues);

EntropyValue von_neumann_entropy(const DensityMatrix& rho);

// tr rho (ln rho - ln sigma); +inf on support violation (kernel overlap > 1e-9).
EntropyValue relative_entropy(const DensityMatrix& rho, const Operator& sigma);
EntropyValue relative_entropy(const Operator& rho, const Operator& sigma);

// (1/(alpha-1)) ln tr(rho^alpha sigma^(1-alpha)), alpha in (0,1).
EntropyValue renyi_relative_entropy(const DensityMatrix& rho, const Operator& sigma, double alpha);

// D_{1-p}(A||B) = -(1/p) ln tr[A^p B^(1-p)], p in (0,1).
double renyi_one_minus_p(const Operator& a, const Operator& b, double p);

// I(A;B) = D(rho_AB || rho_A (x) rho_B) with A the listed subsystems and B the rest.
EntropyValue mutual_information(const DensityMatrix& rho_ab, std::vector<int> a_side);

// H(A|B) = -D(rho_AB || 1_A (x) rho_B) with B the listed conditioning subsystems.
EntropyValue conditional_entropy(const DensityMatrix& rho_ab, std::vector<int> conditioning);
EntropyValue conditional_entropy(const DensityMatrix& rho_ab, int conditioning);

EntropyValue binary_entropy(double p);
double shannon_entropy(std::span<const double> p);

// sum p ln(p/q); q is any nonnegative measure. +inf if p(x) > 0 = q(x).
EntropyValue classical_kl(std::span<const double> p, std::span<const double> q);

// Classical mutual information of a joint distribution joint[x][y].
double classical_mutual_information(const std::vector<std::vector<double>>& joint);

// (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// tr[rho ln G] - ln tr exp(ln sigma + ln G), the exponent taken on supp(sigma).
EntropyValue relative_entropy_variational_value(const DensityMatrix& rho, const Operator& sigma,
                                                const Operator& g);

// c-q state sum_x p(x)|x><x| (x) rho_x, subsystem dims {|X|, d}.
DensityMatrix cq_state(std::span<const double> p, std::span<const DensityMatrix> states);

}  // namespace qsc
