#pragma once

// Seeded instance generators. Every generator is a deterministic function of
// its seed; per-instance seeds are derived with mix_seed so sweeps do not
// depend on thread scheduling.

#include <cstdint>
#include <random>
#include <vector>

#include "qsc/linalg.hpp"

namespace qsc {

using Rng = std::mt19937_64;

// splitmix64 of (base, index)
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

// (1 - d*floor) * G G^dagger / tr + floor * I with G complex Ginibre.
DensityMatrix random_density(int dim, std::uint64_t seed, double min_eig_floor = 0.0);
DensityMatrix random_density(int dim, Rng& rng, double min_eig_floor = 0.0);

DensityMatrix random_pure(int dim, Rng& rng);
CMatrix random_ginibre(int rows, int cols, Rng& rng);
CMatrix random_unitary(int dim, Rng& rng);
// dout x din with V^dagger V = I
CMatrix random_isometry(int din, int dout, Rng& rng);
Operator random_hermitian(int dim, Rng& rng);
// Positive definite with eigenvalues e^{N(0, spread^2)}.
Operator random_positive(int dim, Rng& rng, double spread = 1.0);
// Random PSD of the given rank (rank < dim gives a singular operator).
Operator random_psd(int dim, int rank, Rng& rng);
// 0 <= T <= 1 with eigenvalues uniform on [0,1].
Operator random_test(int dim, Rng& rng);

std::vector<double> random_dirichlet(int k, Rng& rng, double alpha = 1.0);
double uniform01(Rng& rng);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive

}  // namespace qsc
