#include "qsc/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qsc/errors.hpp"

namespace qsc {

namespace {

constexpr double kDistTol = 1e-10;

void validate_distribution(const std::vector<double>& q, const char* name) {
  double s = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] > 0) || !std::isfinite(q[i])) {
      std::ostringstream os;
      os << name << "[" << i << "] = " << q[i] << " must be > 0 (full support)";
      throw ValidationError(os.str());
    }
    s += q[i];
  }
  if (std::abs(s - 1.0) > kDistTol) {
    std::ostringstream os;
    os << name << " sums to " << s << ", not 1 within " << kDistTol;
    throw ValidationError(os.str());
  }
}

}  // namespace

double gamma_constant(const std::vector<DensityMatrix>& states, const Operator& sigma) {
  const Operator inv = matrix_function(sigma, ScalarMap::power(-1.0));
  double g = 0;
  for (const auto& s : states) g = std::max(g, operator_norm(s.matrix() * inv.matrix()));
  return g;
}

CQSource::CQSource(std::vector<std::string> alphabet, std::vector<double> q, std::vector<DensityMatrix> states)
    : alphabet_(std::move(alphabet)), q_(std::move(q)) {
  if (q_.size() != states.size()) throw DimensionError("source: q_x and states have different lengths");
  if (alphabet_.empty())
    for (std::size_t i = 0; i < q_.size(); ++i) alphabet_.push_back(std::to_string(i));
  if (alphabet_.size() != q_.size()) throw DimensionError("source: alphabet and q_x have different lengths");
  validate_distribution(q_, "q_x");
  channel_ = CQChannel(states, 1);
  rho_y_ = DensityMatrix::trusted(make_trusted(channel_.mixture(q_), {channel_.letter_dim()}));
  eta_ = 1.0 / *std::min_element(q_.begin(), q_.end());
  gamma_ = gamma_constant(states, rho_y_.op());
}

DensityMatrix CQSource::joint() const {
  const int nx = static_cast<int>(size());
  const int d = output_dim();
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(nx) * d, static_cast<Eigen::Index>(nx) * d);
  for (int x = 0; x < nx; ++x) m.block(x * d, x * d, d, d) = q_[static_cast<std::size_t>(x)] * state(static_cast<std::size_t>(x)).matrix();
  return DensityMatrix::trusted(make_trusted(std::move(m), {nx, d}));
}

DensityMatrix CQSource::product_of_marginals() const {
  const int nx = static_cast<int>(size());
  const int d = output_dim();
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(nx) * d, static_cast<Eigen::Index>(nx) * d);
  for (int x = 0; x < nx; ++x) m.block(x * d, x * d, d, d) = q_[static_cast<std::size_t>(x)] * rho_y_.matrix();
  return DensityMatrix::trusted(make_trusted(std::move(m), {nx, d}));
}

CQSource product_source(const CQSource& src, int n, const Limits& limits) {
  if (n < 1) throw DomainError("product_source: n must be >= 1");
  if (n == 1) return src;
  if (src.sites() != 1) throw DomainError("product_source: base source must be single-letter");
  const double joint_dim = std::pow(static_cast<double>(src.size()), n) * std::pow(static_cast<double>(src.output_dim()), n);
  if (joint_dim > static_cast<double>(limits.max_dim)) {
    std::ostringstream os;
    os << "product_source: |X|^n d^n = " << joint_dim << " exceeds the dimension cap " << limits.max_dim;
    throw ResourceError(os.str());
  }
  CQSource out;
  out.channel_ = src.channel_.power(n);
  const std::size_t m = out.channel_.inputs();
  out.q_.resize(m);
  out.alphabet_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto dg = out.channel_.digits(i);
    double p = 1;
    std::string label;
    for (std::size_t k = 0; k < dg.size(); ++k) {
      const auto letter = static_cast<std::size_t>(dg[k]);
      p *= src.q_[letter];
      label += (k ? "." : "") + src.alphabet_[letter];
    }
    out.q_[i] = p;
    out.alphabet_[i] = label;
  }
  out.rho_y_ = DensityMatrix::trusted(tensor_power(src.rho_y_.op(), n));
  out.eta_ = std::pow(src.eta_, n);
  out.gamma_ = std::pow(src.gamma_, n);
  return out;
}

StochasticChannel::StochasticChannel(RMatrix kernel) : StochasticChannel({}, {}, std::move(kernel)) {}

StochasticChannel::StochasticChannel(std::vector<std::string> in_alphabet, std::vector<std::string> out_alphabet,
                                     RMatrix kernel)
    : in_(std::move(in_alphabet)), out_(std::move(out_alphabet)), kernel_(std::move(kernel)) {
  if (kernel_.rows() < 1 || kernel_.cols() < 1) throw DimensionError("stochastic channel: empty kernel");
  for (Eigen::Index x = 0; x < kernel_.rows(); ++x) {
    if (kernel_.row(x).minCoeff() < 0) throw ValidationError("stochastic channel: negative entry");
    if (std::abs(kernel_.row(x).sum() - 1.0) > 1e-12) {
      std::ostringstream os;
      os << "stochastic channel: row " << x << " sums to " << kernel_.row(x).sum();
      throw ValidationError(os.str());
    }
  }
  if (in_.empty())
    for (Eigen::Index i = 0; i < kernel_.rows(); ++i) in_.push_back(std::to_string(i));
  if (out_.empty())
    for (Eigen::Index i = 0; i < kernel_.cols(); ++i) out_.push_back(std::to_string(i));
  if (static_cast<Eigen::Index>(in_.size()) != kernel_.rows() || static_cast<Eigen::Index>(out_.size()) != kernel_.cols())
    throw DimensionError("stochastic channel: alphabet sizes do not match kernel");
}

StochasticChannel StochasticChannel::deterministic(const std::vector<int>& f, int out_size) {
  RMatrix k = RMatrix::Zero(static_cast<Eigen::Index>(f.size()), out_size);
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] < 0 || f[x] >= out_size) throw DimensionError("deterministic encoder: output out of range");
    k(static_cast<Eigen::Index>(x), f[x]) = 1.0;
  }
  return StochasticChannel(std::move(k));
}

StochasticChannel StochasticChannel::identity(int size) { return StochasticChannel(RMatrix::Identity(size, size)); }

StochasticChannel StochasticChannel::constant(int in_size, int out_size) {
  RMatrix k = RMatrix::Zero(in_size, out_size);
  k.col(0).setOnes();
  return StochasticChannel(std::move(k));
}

TestFamily::TestFamily(std::vector<Operator> ops) {
  for (std::size_t w = 0; w < ops.size(); ++w) {
    const Spectrum s = eig_hermitian(ops[w]);
    if (s.values.minCoeff() < -tol::eig_clip || s.values.maxCoeff() > 1.0 + tol::eig_clip) {
      std::ostringstream os;
      os << "test operator " << w << " has eigenvalues outside [0,1]";
      throw ValidationError(os.str());
    }
    if (s.values.minCoeff() < 0 || s.values.maxCoeff() > 1)
      ops[w] = make_trusted(s.map([](double v) { return std::clamp(v, 0.0, 1.0); }), ops[w].subsystem_dims());
  }
  ops_ = std::move(ops);
}

ErrorPair errors_of_test(const Operator& t, const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (t.dim() != rho0.dim() || t.dim() != rho1.dim()) throw DimensionError("errors_of_test: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(t.matrix(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() < -tol::eig_clip || ev.maxCoeff() > 1.0 + tol::eig_clip)
    throw ValidationError("errors_of_test: test eigenvalues outside [0,1]");
  return {1.0 - t.trace_product(rho0.op()), t.trace_product(rho1.op())};
}

namespace {

struct BlockEig {
  RVector values;
  CMatrix vectors;
};

std::vector<BlockEig> pencil(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b, double lambda) {
  std::vector<BlockEig> out;
  out.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const CMatrix m = lambda * a[k] - b[k];
    Eigen::SelfAdjointEigenSolver<CMatrix> es((m + m.adjoint()) * 0.5);
    out.push_back({es.eigenvalues(), es.eigenvectors()});
  }
  return out;
}

// tr rho0 P_{>tau}
double positive_mass(const std::vector<BlockEig>& e, const std::vector<CMatrix>& a, double tau) {
  double s = 0;
  for (std::size_t k = 0; k < e.size(); ++k)
    for (Eigen::Index i = 0; i < e[k].values.size(); ++i)
      if (e[k].values[i] > tau) s += (e[k].vectors.col(i).adjoint() * a[k] * e[k].vectors.col(i))(0, 0).real();
  return s;
}

struct Candidate {
  bool feasible = false;
  double alpha = 1.0, beta = 1.0;
  std::vector<CMatrix> tests;
};

Candidate build_test(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b, double lambda, double eps) {
  const auto e = pencil(a, b, lambda);
  const double tol_b = 1e-12 * std::max(1.0, lambda);
  double pos = 0, bnd = 0;
  for (std::size_t k = 0; k < e.size(); ++k)
    for (Eigen::Index i = 0; i < e[k].values.size(); ++i) {
      const double w = (e[k].vectors.col(i).adjoint() * a[k] * e[k].vectors.col(i))(0, 0).real();
      if (e[k].values[i] > tol_b)
        pos += w;
      else if (e[k].values[i] >= -tol_b)
        bnd += w;
    }
  const double need = 1.0 - eps - pos;
  double x = 0;
  if (need > 0) x = bnd > 0 ? std::min(1.0, need / bnd) : 1.0;
  Candidate c;
  double acc0 = 0, acc1 = 0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    RVector wts(e[k].values.size());
    for (Eigen::Index i = 0; i < wts.size(); ++i) {
      const double v = e[k].values[i];
      wts[i] = v > tol_b ? 1.0 : (v >= -tol_b ? x : 0.0);
    }
    CMatrix t = e[k].vectors * wts.cast<cplx>().asDiagonal() * e[k].vectors.adjoint();
    t = (t + t.adjoint()) * 0.5;
    acc0 += (t * a[k]).trace().real();
    acc1 += (t * b[k]).trace().real();
    c.tests.push_back(std::move(t));
  }
  c.alpha = 1.0 - acc0;
  c.beta = acc1;
  c.feasible = c.alpha <= eps + 1e-12;
  return c;
}

}  // namespace

BlockTestResult neyman_pearson_blocks(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b, double eps) {
  if (!(eps >= 0 && eps < 1)) throw DomainError("neyman_pearson: eps must lie in [0,1)");
  if (a.size() != b.size() || a.empty()) throw DimensionError("neyman_pearson: block lists differ");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k].rows() != b[k].rows()) throw DimensionError("neyman_pearson: block sizes differ");

  BlockTestResult out;
  if (eps == 0.0) {
    // T = support projector of rho0
    double acc0 = 0, acc1 = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(a[k]);
      RVector wts(es.eigenvalues().size());
      for (Eigen::Index i = 0; i < wts.size(); ++i) wts[i] = es.eigenvalues()[i] > tol::support ? 1.0 : 0.0;
      CMatrix t = es.eigenvectors() * wts.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
      acc0 += (t * a[k]).trace().real();
      acc1 += (t * b[k]).trace().real();
      out.tests.push_back(std::move(t));
    }
    out.alpha = std::max(0.0, 1.0 - acc0);
    out.beta = acc1;
    out.lambda = std::numeric_limits<double>::infinity();
    return out;
  }

  const double target = 1.0 - eps;
  const auto h = [&](double lambda) {
    return positive_mass(pencil(a, b, lambda), a, 1e-13 * (1.0 + lambda));
  };
  double lo = 0.0, hi = 1.0;
  while (h(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15) break;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) >= target)
      hi = mid;
    else
      lo = mid;
  }

  Candidate best;
  double best_lambda = hi;
  for (double lam : {lo, hi}) {
    Candidate c = build_test(a, b, lam, eps);
    if (c.feasible && (!best.feasible || c.beta < best.beta)) {
      best = std::move(c);
      best_lambda = lam;
    }
  }
  if (!best.feasible) {
    // only reachable when rho0 puts mass outside every finite-lambda positive part
    best = build_test(a, b, hi, eps);
  }
  out.beta = std::clamp(best.beta, 0.0, 1.0);
  out.alpha = std::clamp(best.alpha, 0.0, 1.0);
  out.lambda = best_lambda;
  out.tests = std::move(best.tests);
  return out;
}

NeymanPearsonResult neyman_pearson_beta(const DensityMatrix& rho0, const DensityMatrix& rho1, double eps) {
  if (rho0.dim() != rho1.dim()) throw DimensionError("neyman_pearson: dimension mismatch");
  BlockTestResult r = neyman_pearson_blocks({rho0.matrix()}, {rho1.matrix()}, eps);
  NeymanPearsonResult out;
  out.beta = r.beta;
  out.alpha = r.alpha;
  out.lambda = r.lambda;
  out.test = make_trusted(std::move(r.tests[0]), rho0.op().subsystem_dims());
  return out;
}

DensityMatrix EncodedSource::joint_null() const {
  int d = 0;
  for (const auto& s : states)
    if (s) d = s->dim();
  const auto nw = static_cast<Eigen::Index>(p_w.size());
  CMatrix m = CMatrix::Zero(nw * d, nw * d);
  for (Eigen::Index w = 0; w < nw; ++w)
    if (states[static_cast<std::size_t>(w)]) m.block(w * d, w * d, d, d) = p_w[static_cast<std::size_t>(w)] * states[static_cast<std::size_t>(w)]->matrix();
  return DensityMatrix::trusted(make_trusted(std::move(m), {static_cast<int>(nw), d}));
}

DensityMatrix EncodedSource::joint_alt(const DensityMatrix& rho1) const {
  const int d = rho1.dim();
  const auto nw = static_cast<Eigen::Index>(p_w.size());
  CMatrix m = CMatrix::Zero(nw * d, nw * d);
  for (Eigen::Index w = 0; w < nw; ++w)
    if (states[static_cast<std::size_t>(w)]) m.block(w * d, w * d, d, d) = p_w[static_cast<std::size_t>(w)] * rho1.matrix();
  return DensityMatrix::trusted(make_trusted(std::move(m), {static_cast<int>(nw), d}));
}

EncodedSource apply_encoder(const CQSource& src_n, const StochasticChannel& enc) {
  if (static_cast<std::size_t>(enc.in_size()) != src_n.size())
    throw DimensionError("apply_encoder: encoder input alphabet does not match the source");
  EncodedSource out;
  const int nw = enc.out_size();
  out.p_w.assign(static_cast<std::size_t>(nw), 0.0);
  out.states.resize(static_cast<std::size_t>(nw));
  const auto dims = src_n.channel().output_dims();
  for (int w = 0; w < nw; ++w) {
    std::vector<double> weights(src_n.size());
    double p = 0;
    for (std::size_t x = 0; x < src_n.size(); ++x) {
      weights[x] = src_n.q()[x] * enc(static_cast<int>(x), w);
      p += weights[x];
    }
    out.p_w[static_cast<std::size_t>(w)] = p;
    if (p <= EncodedSource::drop_threshold) continue;
    for (auto& v : weights) v /= p;
    out.states[static_cast<std::size_t>(w)] = DensityMatrix::trusted(make_trusted(src_n.channel().mixture(weights), dims));
  }
  return out;
}

std::size_t message_count(int n, double rate_nats) {
  if (!(rate_nats >= 0)) throw DomainError("rate must be nonnegative");
  const double v = std::floor(std::exp(n * rate_nats) * (1.0 + 1e-12));
  if (v > 1e15) return static_cast<std::size_t>(1e15);
  return std::max<std::size_t>(1, static_cast<std::size_t>(v));
}

namespace {

// encoder index -> digits base W over X^n, most significant first
std::vector<int> encoder_map(std::size_t index, std::size_t inputs, std::size_t messages) {
  std::vector<int> f(inputs);
  for (std::size_t i = inputs; i-- > 0;) {
    f[i] = static_cast<int>(index % messages);
    index /= messages;
  }
  return f;
}

}  // namespace

BruteForceResult brute_force_beta_messages(const CQSource& src, int n, std::size_t messages, double eps, Execution exec,
                                           const Limits& limits) {
  if (!(eps > 0 && eps < 1)) throw DomainError("brute_force_beta: eps must lie in (0,1)");
  const CQSource src_n = product_source(src, n, limits);
  const std::size_t inputs = src_n.size();
  const std::size_t w_eff = std::min(messages, inputs);

  double count = std::pow(static_cast<double>(w_eff), static_cast<double>(inputs));
  if (w_eff == inputs) count = 1;  // identity encoder is optimal once every sequence has its own message
  if (count > static_cast<double>(limits.max_encoders)) {
    std::ostringstream os;
    os << "brute_force_beta: " << count << " encoders exceed the cap " << limits.max_encoders
       << " (raise the cap to at least " << static_cast<long long>(count) << ")";
    throw ResourceError(os.str());
  }
  const auto total = static_cast<std::size_t>(count);

  std::vector<CMatrix> weighted(inputs);
  for (std::size_t x = 0; x < inputs; ++x) weighted[x] = src_n.q()[x] * src_n.state(x).matrix();
  const CMatrix& ry = src_n.rho_y().matrix();

  const auto evaluate = [&](const std::vector<int>& f, std::size_t nw) {
    std::vector<CMatrix> a, b;
    std::vector<double> p(nw, 0.0);
    std::vector<CMatrix> blocks(nw, CMatrix::Zero(ry.rows(), ry.cols()));
    for (std::size_t x = 0; x < inputs; ++x) {
      blocks[static_cast<std::size_t>(f[x])] += weighted[x];
      p[static_cast<std::size_t>(f[x])] += src_n.q()[x];
    }
    for (std::size_t w = 0; w < nw; ++w) {
      if (p[w] <= EncodedSource::drop_threshold) continue;
      a.push_back(blocks[w]);
      b.push_back(p[w] * ry);
    }
    return neyman_pearson_blocks(a, b, eps).beta;
  };

  std::vector<double> betas;
  std::vector<int> best_f;
  if (w_eff == inputs) {
    best_f.resize(inputs);
    std::iota(best_f.begin(), best_f.end(), 0);
    betas = {evaluate(best_f, w_eff)};
  } else {
    betas = parallel_map(total, [&](std::size_t i) { return evaluate(encoder_map(i, inputs, w_eff), w_eff); }, exec);
    best_f = encoder_map(ordered_argmin(betas), inputs, w_eff);
  }
  const std::size_t best = ordered_argmin(betas);

  // report the encoder over the full message set (unused messages get no mass)
  BruteForceResult out{betas[best], StochasticChannel::deterministic(best_f, static_cast<int>(messages > inputs ? w_eff : messages)), {}};
  out.record.name = "brute_force_beta";
  out.record.first_order = -std::log(std::max(betas[best], 1e-300)) / n;
  out.record.constants["messages"] = static_cast<double>(messages);
  out.record.constants["encoders_enumerated"] = static_cast<double>(betas.size());
  out.record.constants["beta_min"] = betas[best];
  out.record.constants["eps"] = eps;
  out.record.constants["n"] = n;
  std::ostringstream enc;
  for (std::size_t x = 0; x < best_f.size(); ++x) enc << (x ? "," : "") << best_f[x];
  out.record.witnesses["encoder"] = enc.str();
  out.record.witnesses["search"] = "deterministic encoders only (upper bound on the infimum)";
  out.record.finalize();
  return out;
}

BruteForceResult brute_force_beta_distributed(const CQSource& src, int n, double r1, double eps, Execution exec,
                                              const Limits& limits) {
  if (!(r1 > 0)) throw DomainError("brute_force_beta: r1 must be positive");
  return brute_force_beta_messages(src, n, message_count(n, r1), eps, exec, limits);
}

ExpurgationResult expurgate(const TestFamily& test, const EncodedSource& encoded, const DensityMatrix& rho1_block,
                            double eps_prime) {
  if (!(eps_prime > 0 && eps_prime < 1)) throw DomainError("expurgate: eps' must lie in (0,1)");
  const std::size_t nw = test.size();
  if (encoded.messages() != nw) throw DimensionError("expurgate: test family and encoder differ in message count");

  std::vector<double> type2(nw), p(nw);
  ExpurgationResult r;
  for (std::size_t w = 0; w < nw; ++w) {
    type2[w] = test[w].trace_product(rho1_block.op());
    p[w] = encoded.kept(w) ? encoded.p_w[w] : 0.0;
    r.beta_old += p[w] * type2[w];
    if (encoded.kept(w)) r.alpha_old += p[w] * (1.0 - test[w].trace_product(encoded.states[w]->op()));
  }
  r.order.resize(nw);
  std::iota(r.order.begin(), r.order.end(), 0);
  std::stable_sort(r.order.begin(), r.order.end(), [&](std::size_t x, std::size_t y) { return type2[x] < type2[y]; });

  // smallest sorted position whose tail (strictly after it) has mass <= eps'
  std::vector<double> tail(nw + 1, 0.0);
  for (std::size_t k = nw; k-- > 0;) tail[k] = tail[k + 1] + p[r.order[k]];
  r.cut = nw - 1;
  for (std::size_t k = 0; k < nw; ++k)
    if (tail[k + 1] <= eps_prime) {
      r.cut = k;
      break;
    }

  std::vector<Operator> ops = test.operators();
  for (std::size_t k = r.cut + 1; k < nw; ++k) {
    const std::size_t w = r.order[k];
    ops[w] = Operator::zero(ops[w].dim()).with_dims(ops[w].subsystem_dims());
  }
  for (std::size_t k = 0; k <= r.cut; ++k) r.max_retained_beta = std::max(r.max_retained_beta, type2[r.order[k]]);
  for (std::size_t w = 0; w < nw; ++w)
    if (encoded.kept(w)) r.alpha_new += p[w] * (1.0 - ops[w].trace_product(encoded.states[w]->op()));
  r.family = TestFamily(std::move(ops));
  return r;
}

}  // namespace qsc
