#pragma once

// Binary quantum hypothesis testing, classical-quantum sources, classical
// encoders and the expurgation transform.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qsc/channel.hpp"
#include "qsc/linalg.hpp"
#include "qsc/parallel.hpp"
#include "qsc/report.hpp"

namespace qsc {

// Ensemble {Q(x), rho^x}. The channel may act on n sites, in which case the
// alphabet is X^n and q is the product distribution.
class CQSource {
 public:
  CQSource(std::vector<std::string> alphabet, std::vector<double> q, std::vector<DensityMatrix> states);

  std::size_t size() const { return q_.size(); }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<double>& q() const { return q_; }
  const CQChannel& channel() const { return channel_; }
  DensityMatrix state(std::size_t x) const { return channel_.state(x); }
  const DensityMatrix& rho_y() const { return rho_y_; }
  double eta() const { return eta_; }
  double gamma() const { return gamma_; }
  bool rho_y_full_rank() const { return rho_y_.min_eig() > tol::support; }
  int sites() const { return channel_.sites(); }
  int output_dim() const { return channel_.output_dim(); }

  // The ensemble as a c-q density matrix sum_x Q(x)|x><x| (x) rho^x.
  DensityMatrix joint() const;
  // rho_X (x) rho_Y
  DensityMatrix product_of_marginals() const;

  friend CQSource product_source(const CQSource& src, int n, const Limits& limits);

 private:
  CQSource() = default;
  std::vector<std::string> alphabet_;
  std::vector<double> q_;
  CQChannel channel_;
  DensityMatrix rho_y_;
  double eta_ = 0.0;
  double gamma_ = 0.0;
};

// max_x || rho^x sigma^+ ||_inf (pseudo-inverse on the support of sigma)
double gamma_constant(const std::vector<DensityMatrix>& states, const Operator& sigma);

// Q^{(x)n} with rho^{x^n} = (x) rho^{x_i}; eta^n and gamma^n carried over.
CQSource product_source(const CQSource& src, int n, const Limits& limits = {});

// Row-stochastic P_{U|X}: kernel(x, u).
class StochasticChannel {
 public:
  StochasticChannel(RMatrix kernel);
  StochasticChannel(std::vector<std::string> in_alphabet, std::vector<std::string> out_alphabet, RMatrix kernel);

  static StochasticChannel deterministic(const std::vector<int>& f, int out_size);
  static StochasticChannel identity(int size);
  static StochasticChannel constant(int in_size, int out_size = 1);

  int in_size() const { return static_cast<int>(kernel_.rows()); }
  int out_size() const { return static_cast<int>(kernel_.cols()); }
  const RMatrix& kernel() const { return kernel_; }
  double operator()(int x, int u) const { return kernel_(x, u); }
  const std::vector<std::string>& in_alphabet() const { return in_; }
  const std::vector<std::string>& out_alphabet() const { return out_; }

 private:
  std::vector<std::string> in_, out_;
  RMatrix kernel_;
};

// Operators 0 <= T^w <= 1 indexed by message w = 0..W-1.
class TestFamily {
 public:
  TestFamily() = default;
  explicit TestFamily(std::vector<Operator> ops);
  std::size_t size() const { return ops_.size(); }
  const Operator& operator[](std::size_t w) const { return ops_[w]; }
  const std::vector<Operator>& operators() const { return ops_; }

 private:
  std::vector<Operator> ops_;
};

struct ErrorPair {
  double alpha = 0.0;  // tr[(1-T) rho0]
  double beta = 0.0;   // tr[T rho1]
};

ErrorPair errors_of_test(const Operator& t, const DensityMatrix& rho0, const DensityMatrix& rho1);

struct NeymanPearsonResult {
  double beta = 1.0;
  double alpha = 0.0;
  double lambda = 0.0;  // Lagrange multiplier of the optimal test
  Operator test;
};

// Optimal type-II error subject to type-I error <= eps.
NeymanPearsonResult neyman_pearson_beta(const DensityMatrix& rho0, const DensityMatrix& rho1, double eps);

struct BlockTestResult {
  double beta = 1.0;
  double alpha = 0.0;
  double lambda = 0.0;
  std::vector<CMatrix> tests;
};

// Neyman-Pearson for block-diagonal pairs rho0 = (+) a_b, rho1 = (+) b_b
// (unnormalized blocks; total traces 1). The optimal test is block diagonal.
BlockTestResult neyman_pearson_blocks(const std::vector<CMatrix>& rho0_blocks, const std::vector<CMatrix>& rho1_blocks,
                                      double eps);

// Encoder image of a source: p(w) and sigma_Y^w.
struct EncodedSource {
  std::vector<double> p_w;                          // every message, including dropped ones
  std::vector<std::optional<DensityMatrix>> states;  // empty when p(w) <= 1e-14
  static constexpr double drop_threshold = 1e-14;

  std::size_t messages() const { return p_w.size(); }
  bool kept(std::size_t w) const { return states[w].has_value(); }
  // sum_w p(w) |w><w| (x) sigma^w
  DensityMatrix joint_null() const;
  // sum_w p(w) |w><w| (x) rho1
  DensityMatrix joint_alt(const DensityMatrix& rho1) const;
};

EncodedSource apply_encoder(const CQSource& src_n, const StochasticChannel& enc);

// |W| = max(1, floor(e^{n r})) with r in nats.
std::size_t message_count(int n, double rate_nats);

struct BruteForceResult {
  double beta_min = 1.0;
  StochasticChannel best_encoder = StochasticChannel::constant(1);
  BoundReport record;
};

// Minimum over deterministic encoders X^n -> W of the Neyman-Pearson type-II
// error between sigma_{WY^n} and sigma_W (x) rho_Y^{(x)n}. This is an upper
// bound on the infimum over all encoders.
BruteForceResult brute_force_beta_distributed(const CQSource& src, int n, double r1, double eps,
                                              Execution exec = Execution::parallel, const Limits& limits = {});

// Same search with an explicit message count.
BruteForceResult brute_force_beta_messages(const CQSource& src, int n, std::size_t messages, double eps,
                                           Execution exec = Execution::parallel, const Limits& limits = {});

struct ExpurgationResult {
  TestFamily family;
  std::vector<std::size_t> order;  // order[k] = original message at sorted position k
  std::size_t cut = 0;             // sorted position w-dagger; positions after it are zeroed
  double alpha_old = 0.0;
  double alpha_new = 0.0;
  double beta_old = 0.0;
  double max_retained_beta = 0.0;  // max over retained w of tr[rho1 T^w]
};

// Sorts messages by tr[rho1 T^w] (stable), keeps the shortest prefix whose
// complement has mass <= eps_prime, and zeroes the rest. The returned family
// is indexed by original message.
ExpurgationResult expurgate(const TestFamily& test, const EncodedSource& encoded, const DensityMatrix& rho1_block,
                            double eps_prime);

}  // namespace qsc
