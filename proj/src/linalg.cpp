#include "qsc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qsc/errors.hpp"

namespace qsc {

namespace {

int product(const std::vector<int>& dims) {
  long long p = 1;
  for (int d : dims) {
    if (d <= 0) throw DimensionError("subsystem dimension must be positive");
    p *= d;
    if (p > (1LL << 30)) throw ResourceError("total dimension overflow");
  }
  return static_cast<int>(p);
}

void check_dims(const CMatrix& m, const std::vector<int>& dims) {
  if (m.rows() != m.cols()) throw DimensionError("operator matrix must be square");
  if (product(dims) != m.rows()) {
    std::ostringstream os;
    os << "subsystem dims multiply to " << product(dims) << " but matrix is " << m.rows() << "x"
       << m.cols();
    throw DimensionError(os.str());
  }
}

// lexicographic (re, im) order on the entries, tolerant to roundoff
bool lex_less(const CVector& a, const CVector& b) {
  constexpr double eps = 1e-12;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i].real() < b[i].real() - eps) return true;
    if (a[i].real() > b[i].real() + eps) return false;
    if (a[i].imag() < b[i].imag() - eps) return true;
    if (a[i].imag() > b[i].imag() + eps) return false;
  }
  return false;
}

}  // namespace

Operator::Operator() : m_(CMatrix::Zero(1, 1)), dims_{1} {}

Operator::Operator(CMatrix m) : Operator(m, std::vector<int>{static_cast<int>(m.rows())}) {}

Operator::Operator(CMatrix m, std::vector<int> subsystem_dims) : dims_(std::move(subsystem_dims)) {
  if (m.rows() == 0) throw DimensionError("empty operator");
  check_dims(m, dims_);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag()))
      throw ValidationError("operator has non-finite entries");
  const double dev = max_abs_diff(m, m.adjoint());
  if (dev > tol::hermitian) {
    std::ostringstream os;
    os << "operator is not Hermitian: max |A - A^dagger| = " << dev << " > " << tol::hermitian;
    throw ValidationError(os.str());
  }
  m_ = (m + m.adjoint()) * 0.5;
}

Operator::Operator(Trusted, CMatrix m, std::vector<int> dims) : dims_(std::move(dims)) {
  m_ = (m + m.adjoint()) * 0.5;
}

Operator make_trusted(CMatrix m, std::vector<int> dims) {
  if (dims.empty()) dims = {static_cast<int>(m.rows())};
  check_dims(m, dims);
  return Operator(Operator::Trusted{}, std::move(m), std::move(dims));
}

Operator Operator::identity(int dim) { return identity(std::vector<int>{dim}); }

Operator Operator::identity(std::vector<int> subsystem_dims) {
  const int d = product(subsystem_dims);
  return make_trusted(CMatrix::Identity(d, d), std::move(subsystem_dims));
}

Operator Operator::zero(int dim) { return make_trusted(CMatrix::Zero(dim, dim), {dim}); }

Operator Operator::diagonal(std::span<const double> d) {
  RVector v(static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) v[static_cast<Eigen::Index>(i)] = d[i];
  CMatrix m = v.cast<cplx>().asDiagonal();
  return Operator(std::move(m));
}

Operator Operator::projector(const CVector& v) {
  return make_trusted(v * v.adjoint(), {static_cast<int>(v.size())});
}

double Operator::trace() const { return m_.trace().real(); }

double Operator::trace_product(const Operator& other) const {
  if (other.dim() != dim()) throw DimensionError("trace_product: dimension mismatch");
  // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B
  return (m_.array() * other.m_.conjugate().array()).sum().real();
}

Operator Operator::with_dims(std::vector<int> subsystem_dims) const {
  check_dims(m_, subsystem_dims);
  return Operator(Trusted{}, m_, std::move(subsystem_dims));
}

Operator operator+(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator+: dimension mismatch");
  return Operator(Operator::Trusted{}, a.m_ + b.m_, a.dims_);
}

Operator operator-(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator-: dimension mismatch");
  return Operator(Operator::Trusted{}, a.m_ - b.m_, a.dims_);
}

Operator operator*(double s, const Operator& a) {
  return Operator(Operator::Trusted{}, s * a.m_, a.dims_);
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape");
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

Spectrum eig_hermitian(const Operator& a) { return eig_hermitian(a.matrix()); }

Spectrum eig_hermitian(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw DomainError("eigendecomposition failed");
  Spectrum s{es.eigenvalues(), es.eigenvectors()};
  const Eigen::Index d = s.values.size();

  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::Index k = 0;
    s.vectors.col(j).cwiseAbs().maxCoeff(&k);
    const cplx pivot = s.vectors(k, j);
    if (std::abs(pivot) > 0) s.vectors.col(j) *= std::conj(pivot) / std::abs(pivot);
  }

  // order each degenerate cluster lexicographically
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && s.values[end] - s.values[end - 1] < tol::degenerate) ++end;
    if (end - start > 1) {
      std::vector<Eigen::Index> idx(static_cast<std::size_t>(end - start));
      std::iota(idx.begin(), idx.end(), start);
      std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index x, Eigen::Index y) {
        return lex_less(s.vectors.col(x), s.vectors.col(y));
      });
      CMatrix block(d, end - start);
      RVector vals(end - start);
      for (std::size_t i = 0; i < idx.size(); ++i) {
        block.col(static_cast<Eigen::Index>(i)) = s.vectors.col(idx[i]);
        vals[static_cast<Eigen::Index>(i)] = s.values[idx[i]];
      }
      s.vectors.middleCols(start, end - start) = block;
      s.values.segment(start, end - start) = vals;
    }
    start = end;
  }
  return s;
}

Operator matrix_function(const Operator& a, const ScalarMap& f) {
  return matrix_function(eig_hermitian(a), f, a.subsystem_dims());
}

Operator matrix_function(const Spectrum& s, const ScalarMap& f, std::vector<int> dims) {
  const double top = s.dim() ? s.values.cwiseAbs().maxCoeff() : 0.0;
  switch (f.kind()) {
    case ScalarMap::Kind::log:
    case ScalarMap::Kind::support_log: {
      if (top <= tol::support) throw DomainError("log of the zero operator");
      const bool strict = f.kind() == ScalarMap::Kind::log;
      if (strict && s.values.minCoeff() <= tol::support)
        throw DomainError("log of an operator with eigenvalue <= 1e-12 (use support_log)");
      if (!strict && s.values.minCoeff() < -tol::eig_clip)
        throw DomainError("log of an operator with a negative eigenvalue");
      return make_trusted(s.map([](double x) { return x > tol::support ? std::log(x) : 0.0; }),
                          std::move(dims));
    }
    case ScalarMap::Kind::exp:
      return make_trusted(s.map([](double x) { return std::exp(x); }), std::move(dims));
    case ScalarMap::Kind::abs:
      return make_trusted(s.map([](double x) { return std::abs(x); }), std::move(dims));
    case ScalarMap::Kind::power: {
      if (s.dim() && s.values.minCoeff() < -tol::eig_clip)
        throw DomainError("power of an operator with a negative eigenvalue");
      const double r = f.exponent();
      // r == 0 gives the support projector
      return make_trusted(s.map([r](double x) { return x > tol::support ? std::pow(x, r) : 0.0; }),
                          std::move(dims));
    }
  }
  throw DomainError("unknown scalar map");
}

Operator tensor(const Operator& a, const Operator& b) {
  const Eigen::Index da = a.dim(), db = b.dim();
  CMatrix k(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j) k.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  std::vector<int> dims = a.subsystem_dims();
  dims.insert(dims.end(), b.subsystem_dims().begin(), b.subsystem_dims().end());
  return make_trusted(std::move(k), std::move(dims));
}

Operator tensor(std::span<const Operator> factors) {
  if (factors.empty()) return make_trusted(CMatrix::Ones(1, 1), {1});
  Operator acc = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) acc = tensor(acc, factors[i]);
  return acc;
}

Operator tensor_power(const Operator& a, int n) {
  if (n < 1) throw DomainError("tensor_power: n must be >= 1");
  Operator acc = a;
  for (int i = 1; i < n; ++i) acc = tensor(acc, a);
  return acc;
}

Operator partial_trace(const Operator& a, std::vector<int> keep) {
  const auto& dims = a.subsystem_dims();
  const int ns = a.num_subsystems();
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
    throw DimensionError("partial_trace: repeated subsystem index");
  for (int k : keep)
    if (k < 0 || k >= ns) throw DimensionError("partial_trace: subsystem index out of range");

  std::vector<bool> kept(static_cast<std::size_t>(ns), false);
  for (int k : keep) kept[static_cast<std::size_t>(k)] = true;

  // split every full index into (kept part, traced part)
  const int d = a.dim();
  std::vector<int> kidx(static_cast<std::size_t>(d)), tidx(static_cast<std::size_t>(d));
  std::vector<int> kdims;
  int dk = 1;
  for (int s = 0; s < ns; ++s)
    if (kept[static_cast<std::size_t>(s)]) {
      kdims.push_back(dims[static_cast<std::size_t>(s)]);
      dk *= dims[static_cast<std::size_t>(s)];
    }
  for (int full = 0; full < d; ++full) {
    int rem = full, kv = 0, tv = 0, kmul = 1, tmul = 1;
    for (int s = ns - 1; s >= 0; --s) {
      const int ds = dims[static_cast<std::size_t>(s)];
      const int digit = rem % ds;
      rem /= ds;
      if (kept[static_cast<std::size_t>(s)]) {
        kv += digit * kmul;
        kmul *= ds;
      } else {
        tv += digit * tmul;
        tmul *= ds;
      }
    }
    kidx[static_cast<std::size_t>(full)] = kv;
    tidx[static_cast<std::size_t>(full)] = tv;
  }

  CMatrix out = CMatrix::Zero(dk, dk);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r)
      if (tidx[static_cast<std::size_t>(r)] == tidx[static_cast<std::size_t>(c)])
        out(kidx[static_cast<std::size_t>(r)], kidx[static_cast<std::size_t>(c)]) += a.matrix()(r, c);
  if (kdims.empty()) kdims = {1};
  return make_trusted(std::move(out), std::move(kdims));
}

Operator permute_subsystems(const Operator& a, const std::vector<int>& perm) {
  const auto& dims = a.subsystem_dims();
  const int ns = a.num_subsystems();
  if (static_cast<int>(perm.size()) != ns) throw DimensionError("permute_subsystems: wrong length");
  std::vector<int> check(perm);
  std::sort(check.begin(), check.end());
  for (int i = 0; i < ns; ++i)
    if (check[static_cast<std::size_t>(i)] != i) throw DimensionError("permute_subsystems: not a permutation");

  std::vector<int> ndims(static_cast<std::size_t>(ns));
  for (int k = 0; k < ns; ++k) ndims[static_cast<std::size_t>(k)] = dims[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
  std::vector<int> old_stride(static_cast<std::size_t>(ns), 1);
  for (int s = ns - 2; s >= 0; --s)
    old_stride[static_cast<std::size_t>(s)] = old_stride[static_cast<std::size_t>(s + 1)] * dims[static_cast<std::size_t>(s + 1)];

  const int d = a.dim();
  std::vector<int> map(static_cast<std::size_t>(d));
  for (int nidx = 0; nidx < d; ++nidx) {
    int rem = nidx, old = 0;
    for (int k = ns - 1; k >= 0; --k) {
      const int digit = rem % ndims[static_cast<std::size_t>(k)];
      rem /= ndims[static_cast<std::size_t>(k)];
      old += digit * old_stride[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
    }
    map[static_cast<std::size_t>(nidx)] = old;
  }
  CMatrix out(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) out(r, c) = a.matrix()(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]);
  return make_trusted(std::move(out), std::move(ndims));
}

double min_eigenvalue(const Operator& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

double max_eigenvalue(const Operator& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()[es.eigenvalues().size() - 1];
}

double operator_norm(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

double schatten_norm(const Operator& a, double p) {
  if (!(p > 0)) throw DomainError("schatten_norm: p must be positive");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  const RVector ev = es.eigenvalues().cwiseAbs();
  const double top = ev.maxCoeff();
  if (std::isinf(p) || top == 0.0) return top;
  double s = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) s += std::pow(ev[i] / top, p);
  return top * std::pow(s, 1.0 / p);
}

DensityMatrix::DensityMatrix() : op_(make_trusted(CMatrix::Ones(1, 1), {1})), min_eig_(1.0) {}

DensityMatrix::DensityMatrix(const Operator& op) {
  Spectrum s = eig_hermitian(op);
  const double lo = s.values.minCoeff();
  if (lo < -tol::eig_clip) {
    std::ostringstream os;
    os << "density matrix has eigenvalue " << lo << " < -" << tol::eig_clip;
    throw ValidationError(os.str());
  }
  const double tr = s.values.sum();
  if (std::abs(tr - 1.0) > tol::trace) {
    std::ostringstream os;
    os << "density matrix trace " << tr << " differs from 1 by more than " << tol::trace;
    throw ValidationError(os.str());
  }
  if (lo < 0) {
    op_ = make_trusted(s.map([](double x) { return std::max(x, 0.0); }), op.subsystem_dims());
    min_eig_ = 0.0;
  } else {
    op_ = op;
    min_eig_ = lo;
  }
}

DensityMatrix DensityMatrix::pure(const CVector& psi, std::vector<int> dims) {
  const double nrm = psi.norm();
  if (!(nrm > 0)) throw ValidationError("pure state from zero vector");
  CVector v = psi / nrm;
  if (dims.empty()) dims = {static_cast<int>(v.size())};
  return DensityMatrix(make_trusted(v * v.adjoint(), std::move(dims)));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(make_trusted(CMatrix::Identity(dim, dim) / static_cast<double>(dim), {dim}));
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probs) {
  return DensityMatrix(Operator::diagonal(probs));
}

DensityMatrix DensityMatrix::trusted(Operator op) {
  DensityMatrix d;
  d.op_ = std::move(op);
  d.min_eig_ = std::max(0.0, min_eigenvalue(d.op_));
  return d;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::trusted(tensor(a.op(), b.op()));
}

DensityMatrix partial_trace(const DensityMatrix& a, std::vector<int> keep) {
  return DensityMatrix(partial_trace(a.op(), std::move(keep)));
}

}  // namespace qsc
