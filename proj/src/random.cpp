#include "qsc/random.hpp"

#include <cmath>

#include "qsc/errors.hpp"

namespace qsc {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

CMatrix random_ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

DensityMatrix random_density(int dim, std::uint64_t seed, double min_eig_floor) {
  Rng rng(seed);
  return random_density(dim, rng, min_eig_floor);
}

DensityMatrix random_density(int dim, Rng& rng, double min_eig_floor) {
  if (dim < 1) throw DimensionError("random_density: dim must be positive");
  if (min_eig_floor < 0 || min_eig_floor * dim >= 1.0)
    throw DomainError("random_density: min_eig_floor must lie in [0, 1/dim)");
  if (dim == 1) return DensityMatrix::maximally_mixed(1);
  const CMatrix g = random_ginibre(dim, dim, rng);
  CMatrix w = g * g.adjoint();
  w /= w.trace().real();
  CMatrix rho = (1.0 - dim * min_eig_floor) * w + min_eig_floor * CMatrix::Identity(dim, dim);
  return DensityMatrix(make_trusted(std::move(rho), {dim}));
}

DensityMatrix random_pure(int dim, Rng& rng) {
  return DensityMatrix::pure(random_ginibre(dim, 1, rng).col(0));
}

CMatrix random_unitary(int dim, Rng& rng) {
  const CMatrix g = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_isometry(int din, int dout, Rng& rng) {
  if (din > dout) throw DimensionError("random_isometry: din > dout");
  return random_unitary(dout, rng).leftCols(din);
}

Operator random_hermitian(int dim, Rng& rng) {
  const CMatrix g = random_ginibre(dim, dim, rng);
  return make_trusted((g + g.adjoint()) * 0.5, {dim});
}

Operator random_positive(int dim, Rng& rng, double spread) {
  std::normal_distribution<double> g(0.0, spread);
  const CMatrix u = random_unitary(dim, rng);
  RVector ev(dim);
  for (int i = 0; i < dim; ++i) ev[i] = std::exp(g(rng));
  return make_trusted(u * ev.cast<cplx>().asDiagonal() * u.adjoint(), {dim});
}

Operator random_psd(int dim, int rank, Rng& rng) {
  const CMatrix g = random_ginibre(dim, rank, rng);
  return make_trusted(g * g.adjoint() / static_cast<double>(rank), {dim});
}

Operator random_test(int dim, Rng& rng) {
  const CMatrix u = random_unitary(dim, rng);
  RVector ev(dim);
  for (int i = 0; i < dim; ++i) ev[i] = uniform01(rng);
  return make_trusted(u * ev.cast<cplx>().asDiagonal() * u.adjoint(), {dim});
}

std::vector<double> random_dirichlet(int k, Rng& rng, double alpha) {
  std::gamma_distribution<double> g(alpha, 1.0);
  std::vector<double> p(static_cast<std::size_t>(k));
  double s = 0;
  for (auto& v : p) {
    v = g(rng);
    s += v;
  }
  if (!(s > 0)) {
    for (auto& v : p) v = 1.0 / k;
    return p;
  }
  for (auto& v : p) v /= s;
  return p;
}

}  // namespace qsc
