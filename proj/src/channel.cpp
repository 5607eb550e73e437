#include "qsc/channel.hpp"

#include "qsc/errors.hpp"

namespace qsc {

namespace {

long long ipow(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) {
    r *= b;
    if (r > (1LL << 40)) throw ResourceError("product alphabet or dimension too large");
  }
  return r;
}

// Contract the first site of an (d*D) x (d*D) matrix against every letter.
void contract(const std::vector<DensityMatrix>& letters, const CMatrix& l, int d, int sites_left,
              std::vector<double>& out) {
  if (sites_left == 0) {
    out.push_back(l(0, 0).real());
    return;
  }
  const Eigen::Index rest = l.rows() / d;
  for (const auto& rho : letters) {
    CMatrix reduced = CMatrix::Zero(rest, rest);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const cplx w = rho.matrix()(j, i);
        if (w != cplx(0)) reduced.noalias() += w * l.block(i * rest, j * rest, rest, rest);
      }
    contract(letters, reduced, d, sites_left - 1, out);
  }
}

CMatrix mix(const std::vector<DensityMatrix>& letters, const double* w, std::size_t count, int d, int sites) {
  if (sites == 0) return CMatrix::Constant(1, 1, w[0]);
  const std::size_t block = count / letters.size();
  CMatrix out;
  bool init = false;
  for (std::size_t a = 0; a < letters.size(); ++a) {
    bool any = false;
    for (std::size_t k = 0; k < block; ++k)
      if (w[a * block + k] != 0.0) {
        any = true;
        break;
      }
    if (!any) continue;
    const CMatrix sub = mix(letters, w + a * block, block, d, sites - 1);
    const Eigen::Index r = sub.rows();
    if (!init) {
      out = CMatrix::Zero(d * r, d * r);
      init = true;
    }
    const CMatrix& rho = letters[a].matrix();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (rho(i, j) != cplx(0)) out.block(i * r, j * r, r, r) += rho(i, j) * sub;
  }
  if (!init) {
    long long dim = ipow(d, sites);
    out = CMatrix::Zero(dim, dim);
  }
  return out;
}

}  // namespace

CQChannel::CQChannel(std::vector<DensityMatrix> letters, int sites) : letters_(std::move(letters)), sites_(sites) {
  if (letters_.empty()) throw DimensionError("channel needs at least one letter");
  if (sites_ < 1) throw DomainError("channel needs at least one site");
  letter_dim_ = letters_[0].dim();
  for (const auto& l : letters_)
    if (l.dim() != letter_dim_) throw DimensionError("channel letters have different dimensions");
  ipow(letter_dim_, sites_);
  ipow(static_cast<long long>(letters_.size()), sites_);
}

int CQChannel::output_dim() const { return static_cast<int>(ipow(letter_dim_, sites_)); }

std::size_t CQChannel::inputs() const {
  return static_cast<std::size_t>(ipow(static_cast<long long>(letters_.size()), sites_));
}

std::vector<int> CQChannel::output_dims() const { return std::vector<int>(static_cast<std::size_t>(sites_), letter_dim_); }

std::vector<int> CQChannel::digits(std::size_t index) const {
  std::vector<int> dg(static_cast<std::size_t>(sites_));
  const auto m = letters_.size();
  for (int i = sites_ - 1; i >= 0; --i) {
    dg[static_cast<std::size_t>(i)] = static_cast<int>(index % m);
    index /= m;
  }
  return dg;
}

std::size_t CQChannel::index(const std::vector<int>& dg) const {
  std::size_t idx = 0;
  for (int v : dg) idx = idx * letters_.size() + static_cast<std::size_t>(v);
  return idx;
}

DensityMatrix CQChannel::state(std::size_t index) const {
  const auto dg = digits(index);
  Operator acc = letters_[static_cast<std::size_t>(dg[0])].op();
  for (std::size_t i = 1; i < dg.size(); ++i) acc = tensor(acc, letters_[static_cast<std::size_t>(dg[i])].op());
  return DensityMatrix::trusted(acc);
}

std::vector<double> CQChannel::expectations(const Operator& l) const { return expectations(l.matrix()); }

std::vector<double> CQChannel::expectations(const CMatrix& l) const {
  if (l.rows() != output_dim()) throw DimensionError("expectations: operator dimension mismatch");
  std::vector<double> out;
  out.reserve(inputs());
  contract(letters_, l, letter_dim_, sites_, out);
  return out;
}

CMatrix CQChannel::mixture(const std::vector<double>& w) const {
  if (w.size() != inputs()) throw DimensionError("mixture: weight vector length mismatch");
  return mix(letters_, w.data(), w.size(), letter_dim_, sites_);
}

CQChannel CQChannel::power(int n) const { return CQChannel(letters_, sites_ * n); }

}  // namespace qsc
