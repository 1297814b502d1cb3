#pragma once

#include <optional>
#include <vector>

#include "zeno/hilbert.hpp"
#include "zeno/lindblad.hpp"
#include "zeno/matrix.hpp"

namespace zeno {

/// Expansion terms needed a singular solve (degenerate lambda_0 or singular
/// kernel-coefficient matrix); the Zeno limit of the state is not pure there.
struct SingularExpansionError : Error {
  using Error::Error;
};

/// Blocks h_jk = <e^j| H |e^k> of the Hamiltonian in an orthonormal H0 basis
/// with e^0 = psi_Zeno, together with the eigenbasis of h_00 anchored at the
/// target state (alpha = 0).
class BlockDecomposition {
 public:
  Index d0() const { return e_basis_.cols(); }
  Index d1() const { return alpha_basis_.cols(); }
  /// h_jk in the computational H1 basis.
  const ComplexMatrix& h(Index j, Index k) const;
  /// h_jk in the alpha basis: U_alpha^dag h_jk U_alpha.
  ComplexMatrix h_alpha(Index j, Index k) const;
  const RealVector& lambda() const { return lambda_; }
  const ComplexMatrix& e_basis() const { return e_basis_; }
  const ComplexMatrix& alpha_basis() const { return alpha_basis_; }
  /// Full Hamiltonian in the (e^j x alpha) product basis.
  ComplexMatrix tilde_hamiltonian() const;

  friend BlockDecomposition block_decompose(const ComplexMatrix&, const PureState&,
                                            const PureState&, const HilbertLayout&,
                                            const PureState*, double);

 private:
  std::vector<ComplexMatrix> blocks_;  // row-major, j * d0 + k
  ComplexMatrix e_basis_;              // d0 x d0, column j = |e^j>
  ComplexMatrix alpha_basis_;          // d1 x d1, column a = |alpha>
  RealVector lambda_;
};

/// Verdict of the targeting condition H|Psi> = lambda|Psi> + kappa |perp>|target>.
struct CriterionReport {
  bool satisfied = false;
  double lambda = 0.0;
  Complex kappa{0.0, 0.0};
  double residual_norm = 0.0;    // norm of the part of H|Psi> outside the allowed span
  bool strong_criterion = false; // H|Psi> = lambda|Psi> and all L_k|Psi> = 0
  PureState zeno_perp;           // extracted |psi_Zeno^perp>, in H0
  double h_norm = 0.0;           // Frobenius norm used for relative tolerances
  double tol = 0.0;
  double max_jump_residual = 0.0;  // max_k ||L_k |Psi>||, when jumps were supplied
};

/// Decompose H; when a criterion report is supplied its zeno_perp becomes e^1,
/// otherwise the basis is completed by Gram-Schmidt. Throws ModelError when
/// psi_target is not an eigenvector of h_00 within tol * ||h_00||.
BlockDecomposition block_decompose(const ComplexMatrix& h, const PureState& psi_zeno,
                                   const PureState& psi_target, const HilbertLayout& layout,
                                   const PureState* zeno_perp = nullptr, double tol = 1e-9);

CriterionReport check_criterion(const ComplexMatrix& h, const PureState& psi_zeno,
                                const PureState& psi_target, const HilbertLayout& layout,
                                double tol = 1e-9);
/// Same, but also verifies L_k |Psi> = 0 for the model's jumps (strong flag).
CriterionReport check_criterion(const LindbladModel& model, const PureState& psi_zeno,
                                const PureState& psi_target, double tol = 1e-9);

/// Minimum-norm inverse of the canonical H0 dissipator with L = J_{0,d0},
/// acting on a full-space operator x given in the layout's original basis.
/// Requires tr_H0(x) = 0 within tol (Lemma-style necessity); the kernel
/// component |e^0><e^0| (x) anything of the result is zero.
ComplexMatrix dissipator_inverse(const ComplexMatrix& x, const HilbertLayout& layout,
                                 double tol = 1e-9);

/// Superoperator solver for a dissipator supported on H0 (one or several
/// jumps), with a nondegenerate pure kernel. Works in whatever H0 basis the
/// jump matrices are expressed in.
class DissipatorSolver {
 public:
  DissipatorSolver(std::vector<ComplexMatrix> h0_jumps, Index d1);

  Index d0() const { return d0_; }
  Index kernel_dim() const { return kernel_dim_; }
  /// Kernel basis vector as a d0 x d0 matrix (unit Frobenius norm).
  ComplexMatrix kernel_matrix() const;
  ComplexMatrix apply(const ComplexMatrix& x) const;
  /// Minimum-norm y with apply(y) = x; throws NotInImageError when x is not
  /// in the image within tol * ||x||.
  ComplexMatrix inverse(const ComplexMatrix& x, double tol = 1e-9) const;

 private:
  Index d0_ = 0;
  Index d1_ = 0;
  Index kernel_dim_ = 0;
  std::vector<ComplexMatrix> jumps_;
  ComplexMatrix superop_;  // d0^2 x d0^2
  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod_;
  ComplexMatrix kernel_;
};

/// Orders 0..2 of the 1/Gamma expansion of the steady state plus the kernel
/// components that determine them.
struct ExpansionTerms {
  ComplexMatrix rho0, rho1, rho2;  // full space, original basis
  ComplexMatrix m1, m2;            // d1 x d1 kernel components, alpha basis
  RealVector q;                    // q_alpha, alpha = 1..d1-1
  RealVector mu;                   // order-1 kernel diagonal, expected zero
  double gamma_ch_expansion = 0.0;
  double secular_residual[3] = {0, 0, 0};  // ||tr_H0 [H, rho_m]|| / ||H||
  double order3_diag_residual = 0.0;       // leftover alpha=0 third-order check
};

/// Requires criterion.satisfied (or strong_criterion, in which case all
/// corrections vanish identically). Throws SingularExpansionError at the
/// singular points (degenerate lambda_0, singular secular systems).
ExpansionTerms expansion_terms(const LindbladModel& model, const BlockDecomposition& decomp,
                               const CriterionReport& criterion);

struct GammaChReport {
  double gamma_ch_theorem = 0.0;    // closed-form route
  double gamma_ch_expansion = 0.0;  // route through the 1/Gamma expansion
  std::optional<double> gamma_ch_fit;  // numeric route, filled by callers
  RealMatrix K;                     // (d1-1)^2 coefficient matrix
  double det_K = 0.0;
  double det_h00_shifted = 0.0;     // prod_{a>0} (lambda_a - lambda_0)
  bool lambda0_degenerate = false;
  bool divergent = false;
  double route_deviation = 0.0;     // |theorem - expansion| / max(...)
};

/// Both closed-form and expansion routes; singular cases are reported through
/// the divergent flag (values +inf) rather than exceptions so that parameter
/// sweeps can plot divergences.
GammaChReport gamma_ch(const BlockDecomposition& decomp, const CriterionReport& criterion);
/// Same, with the expansion route driven by the model's own dissipator.
GammaChReport gamma_ch(const LindbladModel& model, const BlockDecomposition& decomp,
                       const CriterionReport& criterion);

/// Least-squares fit of Gamma^2 * purity_deficit(ness(Gamma)) to c0 + c1/Gamma;
/// returns sqrt(c0). Requires >= 3 grid points and a unique NESS at each.
double gamma_ch_fit(const LindbladModel& model, const std::vector<double>& gammas);

struct SingularityScan {
  std::vector<Index> lambda_poles;   // alpha with lambda_alpha ~ lambda_0
  RealVector d_values;               // d_alpha, alpha = 1..d1-1
  std::vector<Index> vanishing_d;
  RealMatrix K;
  double det_K = 0.0;
  enum class Gershgorin { all_positive, all_zero, mixed } gershgorin;
  bool k_invertible = false;
};

SingularityScan singularity_scan(const BlockDecomposition& decomp);

}  // namespace zeno
