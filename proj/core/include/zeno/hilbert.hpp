#pragma once

#include <vector>

#include "zeno/matrix.hpp"

namespace zeno {

/// Tensor-factor bookkeeping for the split H = H0 (dissipated) x H1 (target).
///
/// Factor 0 is the slowest-varying index of the full-space basis. The H0
/// factors need not be contiguous; block_permutation() owns the map from
/// original indices to (H0, H1) block order with the H0 index slowest.
class HilbertLayout {
 public:
  HilbertLayout() = default;
  HilbertLayout(std::vector<Index> factor_dims, std::vector<int> h0_factors);

  static HilbertLayout bipartite(Index d0, Index d1);
  static HilbertLayout qubits(int n_factors, std::vector<int> h0_factors);

  Index d0() const { return d0_; }
  Index d1() const { return d1_; }
  Index dim() const { return d0_ * d1_; }
  const std::vector<Index>& factor_dims() const { return factor_dims_; }
  const std::vector<int>& h0_factors() const { return h0_factors_; }
  bool is_h0_factor(int f) const;

  /// perm[j * d1 + a] = original index carrying H0 digits j and H1 digits a.
  const std::vector<Index>& block_permutation() const { return perm_; }

  ComplexMatrix to_block(const ComplexMatrix& a) const;
  ComplexMatrix from_block(const ComplexMatrix& a) const;
  ComplexVector to_block(const ComplexVector& v) const;
  ComplexVector from_block(const ComplexVector& v) const;

 private:
  Index d0_ = 1;
  Index d1_ = 1;
  std::vector<Index> factor_dims_;
  std::vector<int> h0_factors_;
  std::vector<Index> perm_;
};

/// Unit-norm state vector. The Hilbert-space layout travels separately.
struct PureState {
  ComplexVector amplitudes;

  Index dim() const { return amplitudes.size(); }
  double norm() const { return amplitudes.norm(); }
  PureState normalized() const;
  /// Throws ModelError unless the norm is 1 within tol.
  void require_normalized(double tol = 1e-12) const;
};

PureState kron(const PureState& a, const PureState& b);

}  // namespace zeno
