#pragma once

// Memoryless classical-quantum channel x^n -> rho^{x_1} (x) ... (x) rho^{x_n}.
// Sequences are indexed as sum_i x_i m^{n-1-i}, which matches Kronecker order,
// so site 0 is the most significant digit. Product states are never stored;
// mixtures and expectations are computed by contracting one site at a time.

#include <cstddef>
#include <vector>

#include "qsc/linalg.hpp"

namespace qsc {

class CQChannel {
 public:
  CQChannel() = default;
  CQChannel(std::vector<DensityMatrix> letters, int sites = 1);

  int letters() const { return static_cast<int>(letters_.size()); }  // m
  int sites() const { return sites_; }                                 // n
  int letter_dim() const { return letter_dim_; }
  int output_dim() const;                                              // letter_dim^n
  std::size_t inputs() const;                                          // m^n
  std::vector<int> output_dims() const;                                // {d, ..., d}
  const DensityMatrix& letter(int x) const { return letters_[static_cast<std::size_t>(x)]; }
  const std::vector<DensityMatrix>& letter_states() const { return letters_; }

  std::vector<int> digits(std::size_t index) const;
  std::size_t index(const std::vector<int>& digits) const;

  // rho^{x^n}
  DensityMatrix state(std::size_t index) const;
  // tr[rho^{x^n} L] for every x^n, in index order
  std::vector<double> expectations(const Operator& l) const;
  std::vector<double> expectations(const CMatrix& l) const;
  // sum_{x^n} w(x^n) rho^{x^n}
  CMatrix mixture(const std::vector<double>& w) const;

  CQChannel power(int n) const;

 private:
  std::vector<DensityMatrix> letters_;
  int sites_ = 0;
  int letter_dim_ = 0;
};

}  // namespace qsc
