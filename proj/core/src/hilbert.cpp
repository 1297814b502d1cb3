#include "zeno/hilbert.hpp"

#include <algorithm>
#include <numeric>

namespace zeno {

namespace {

std::vector<Index> digits_of(Index idx, const std::vector<Index>& dims) {
  // leftmost factor is the slowest-varying index
  std::vector<Index> out(dims.size());
  for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
    out[f] = idx % dims[f];
    idx /= dims[f];
  }
  return out;
}

}  // namespace

HilbertLayout::HilbertLayout(std::vector<Index> factor_dims, std::vector<int> h0_factors)
    : factor_dims_(std::move(factor_dims)), h0_factors_(std::move(h0_factors)) {
  if (factor_dims_.empty()) throw DimensionError("HilbertLayout: no factors");
  for (Index d : factor_dims_)
    if (d < 1) throw DimensionError("HilbertLayout: factor dimension < 1");
  std::vector<char> seen(factor_dims_.size(), 0);
  for (int f : h0_factors_) {
    if (f < 0 || f >= static_cast<int>(factor_dims_.size()))
      throw DimensionError("HilbertLayout: H0 factor index out of range");
    if (seen[f]++) throw DimensionError("HilbertLayout: duplicate H0 factor");
  }
  d0_ = 1;
  for (int f : h0_factors_) d0_ *= factor_dims_[f];
  Index total = std::accumulate(factor_dims_.begin(), factor_dims_.end(), Index{1},
                                std::multiplies<>());
  d1_ = total / d0_;

  // perm_[j * d1 + a] = original index with H0 digits j (in h0_factors_ order)
  // and H1 digits a (remaining factors in ascending order).
  std::vector<int> h1_factors;
  for (int f = 0; f < static_cast<int>(factor_dims_.size()); ++f)
    if (!seen[f]) h1_factors.push_back(f);

  perm_.resize(total);
  for (Index orig = 0; orig < total; ++orig) {
    const auto dig = digits_of(orig, factor_dims_);
    Index j = 0;
    for (int f : h0_factors_) j = j * factor_dims_[f] + dig[f];
    Index a = 0;
    for (int f : h1_factors) a = a * factor_dims_[f] + dig[f];
    perm_[j * d1_ + a] = orig;
  }
}

HilbertLayout HilbertLayout::bipartite(Index d0, Index d1) {
  return HilbertLayout({d0, d1}, {0});
}

HilbertLayout HilbertLayout::qubits(int n_factors, std::vector<int> h0_factors) {
  return HilbertLayout(std::vector<Index>(n_factors, 2), std::move(h0_factors));
}

bool HilbertLayout::is_h0_factor(int f) const {
  return std::find(h0_factors_.begin(), h0_factors_.end(), f) != h0_factors_.end();
}

ComplexMatrix HilbertLayout::to_block(const ComplexMatrix& a) const {
  require_square(a, "HilbertLayout::to_block");
  if (a.rows() != dim()) throw DimensionError("HilbertLayout::to_block: dimension mismatch");
  ComplexMatrix out(dim(), dim());
  for (Index r = 0; r < dim(); ++r)
    for (Index c = 0; c < dim(); ++c) out(r, c) = a(perm_[r], perm_[c]);
  return out;
}

ComplexMatrix HilbertLayout::from_block(const ComplexMatrix& a) const {
  require_square(a, "HilbertLayout::from_block");
  if (a.rows() != dim()) throw DimensionError("HilbertLayout::from_block: dimension mismatch");
  ComplexMatrix out(dim(), dim());
  for (Index r = 0; r < dim(); ++r)
    for (Index c = 0; c < dim(); ++c) out(perm_[r], perm_[c]) = a(r, c);
  return out;
}

ComplexVector HilbertLayout::to_block(const ComplexVector& v) const {
  if (v.size() != dim()) throw DimensionError("HilbertLayout::to_block: dimension mismatch");
  ComplexVector out(dim());
  for (Index r = 0; r < dim(); ++r) out(r) = v(perm_[r]);
  return out;
}

ComplexVector HilbertLayout::from_block(const ComplexVector& v) const {
  if (v.size() != dim()) throw DimensionError("HilbertLayout::from_block: dimension mismatch");
  ComplexVector out(dim());
  for (Index r = 0; r < dim(); ++r) out(perm_[r]) = v(r);
  return out;
}

PureState PureState::normalized() const {
  const double n = amplitudes.norm();
  if (n == 0.0) throw ModelError("PureState: zero vector cannot be normalized");
  return PureState{amplitudes / n};
}

void PureState::require_normalized(double tol) const {
  if (std::abs(norm() - 1.0) > tol)
    throw ModelError("PureState: norm deviates from 1 beyond tolerance");
}

PureState kron(const PureState& a, const PureState& b) {
  ComplexVector out(a.dim() * b.dim());
  for (Index i = 0; i < a.dim(); ++i)
    out.segment(i * b.dim(), b.dim()) = a.amplitudes(i) * b.amplitudes;
  return PureState{std::move(out)};
}

}  // namespace zeno
