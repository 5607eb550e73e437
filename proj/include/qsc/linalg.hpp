#pragma once

// Dense Hermitian linear algebra: the operator carrier, spectral calculus,
// tensor products and partial traces. Everything here is a value type; no
// operation mutates its arguments.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qsc {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

namespace tol {
inline constexpr double hermitian = 1e-10;   // max-norm of A - A^dagger accepted (then symmetrized)
inline constexpr double eig_clip = 1e-10;    // eigenvalues in [-eig_clip, 0) clip to 0
inline constexpr double trace = 1e-10;       // |tr rho - 1| for density matrices
inline constexpr double support = 1e-12;     // pseudo-log / pseudo-inverse threshold
inline constexpr double degenerate = 1e-10;  // eigenvalue gap treated as degenerate
inline constexpr double kernel_overlap = 1e-9;
}  // namespace tol

struct Limits {
  std::size_t max_dim = 1024;
  std::size_t max_encoders = 2'000'000;
  std::size_t max_enumeration = 1'000'000;
};

// Hermitian operator with subsystem metadata. Constructed values are exactly
// Hermitian: inputs within tol::hermitian are symmetrized, others rejected.
class Operator {
 public:
  Operator();
  explicit Operator(CMatrix m);
  Operator(CMatrix m, std::vector<int> subsystem_dims);

  static Operator identity(int dim);
  static Operator identity(std::vector<int> subsystem_dims);
  static Operator zero(int dim);
  static Operator diagonal(std::span<const double> d);
  static Operator projector(const CVector& v);  // |v><v| (v need not be normalized)

  int dim() const { return static_cast<int>(m_.rows()); }
  const std::vector<int>& subsystem_dims() const { return dims_; }
  int num_subsystems() const { return static_cast<int>(dims_.size()); }
  const CMatrix& matrix() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

  double trace() const;
  // Re tr(this * other) for Hermitian arguments.
  double trace_product(const Operator& other) const;

  Operator with_dims(std::vector<int> subsystem_dims) const;

  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(double s, const Operator& a);
  friend Operator operator*(const Operator& a, double s) { return s * a; }

 private:
  struct Trusted {};
  Operator(Trusted, CMatrix m, std::vector<int> dims);
  friend Operator make_trusted(CMatrix m, std::vector<int> dims);

  CMatrix m_;
  std::vector<int> dims_;
};

// Builds an Operator from a matrix already known to be Hermitian (internal use
// in hot loops: symmetrizes without re-validating).
Operator make_trusted(CMatrix m, std::vector<int> dims);

double max_abs_diff(const CMatrix& a, const CMatrix& b);

// Eigendecomposition a = U diag(values) U^dagger. Values ascending; vectors
// phase-fixed (largest-modulus entry real positive) and, inside a degenerate
// cluster, ordered lexicographically by their entries.
struct Spectrum {
  RVector values;
  CMatrix vectors;
  int dim() const { return static_cast<int>(values.size()); }
  // U diag(f(values)) U^dagger
  template <class F>
  CMatrix map(F&& f) const {
    RVector fv(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) fv[i] = f(values[i]);
    return vectors * fv.asDiagonal() * vectors.adjoint();
  }
};

Spectrum eig_hermitian(const Operator& a);
Spectrum eig_hermitian(const CMatrix& hermitian);

// Named scalar maps for the spectral calculus (natural logarithm throughout).
class ScalarMap {
 public:
  enum class Kind { log, support_log, exp, power, abs };

  static ScalarMap log() { return ScalarMap(Kind::log, 0.0); }
  // log on eigenvalues > tol::support, 0 elsewhere in the spectral sum
  static ScalarMap support_log() { return ScalarMap(Kind::support_log, 0.0); }
  static ScalarMap exp() { return ScalarMap(Kind::exp, 0.0); }
  // x^r; for r < 0 acts as the pseudo-inverse power on the support
  static ScalarMap power(double r) { return ScalarMap(Kind::power, r); }
  static ScalarMap abs() { return ScalarMap(Kind::abs, 0.0); }

  Kind kind() const { return kind_; }
  double exponent() const { return r_; }

 private:
  ScalarMap(Kind k, double r) : kind_(k), r_(r) {}
  Kind kind_;
  double r_;
};

Operator matrix_function(const Operator& a, const ScalarMap& f);
Operator matrix_function(const Spectrum& s, const ScalarMap& f, std::vector<int> dims);

Operator tensor(const Operator& a, const Operator& b);
Operator tensor(std::span<const Operator> factors);
Operator tensor_power(const Operator& a, int n);

// Keeps the listed subsystems (in ascending order of index) and traces out the
// rest. An empty keep list yields the 1x1 total trace.
Operator partial_trace(const Operator& a, std::vector<int> keep);

// Reorders subsystems: result subsystem k is input subsystem perm[k].
Operator permute_subsystems(const Operator& a, const std::vector<int>& perm);

// Smallest / largest eigenvalue.
double min_eigenvalue(const Operator& a);
double max_eigenvalue(const Operator& a);

// Largest singular value of an arbitrary square matrix.
double operator_norm(const CMatrix& m);

// Schatten p-norm (p may be +infinity) of a Hermitian operator.
double schatten_norm(const Operator& a, double p);

// Density matrix: PSD (eigenvalues in [-eig_clip, 0) clipped to zero) with
// unit trace.
class DensityMatrix {
 public:
  DensityMatrix();
  explicit DensityMatrix(const Operator& op);

  static DensityMatrix pure(const CVector& psi, std::vector<int> dims = {});
  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix diagonal(std::span<const double> probs);
  // Skips validation; for convex combinations / tensor products of states
  // already known to be valid.
  static DensityMatrix trusted(Operator op);

  const Operator& op() const { return op_; }
  operator const Operator&() const { return op_; }
  int dim() const { return op_.dim(); }
  double min_eig() const { return min_eig_; }
  const CMatrix& matrix() const { return op_.matrix(); }

 private:
  Operator op_;
  double min_eig_ = 1.0;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix partial_trace(const DensityMatrix& a, std::vector<int> keep);

}  // namespace qsc
