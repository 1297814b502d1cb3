#pragma once

#include <vector>

#include "zeno/hilbert.hpp"
#include "zeno/matrix.hpp"

namespace zeno {

/// d rho / dt = -i [H, rho] + Gamma * sum_k s_k D_{L_k} rho.
///
/// All jump operators are stored already embedded in the full space and share
/// the common dissipative strength gamma; the optional per-jump scale factors
/// s_k default to 1.
struct LindbladModel {
  ComplexMatrix hamiltonian;
  std::vector<ComplexMatrix> jumps;
  double gamma = 1.0;
  HilbertLayout layout;
  std::vector<double> jump_scales;  // empty means all 1

  double jump_scale(std::size_t k) const {
    return jump_scales.empty() ? 1.0 : jump_scales.at(k);
  }
  /// Hermiticity of H (1e-10 relative) and dimension checks.
  void validate() const;
};

/// D_L rho = L rho L^dag - (L^dag L rho + rho L^dag L) / 2.
ComplexMatrix apply_dissipator(const ComplexMatrix& l, const ComplexMatrix& rho);

/// Direct evaluation of the generator acting on rho.
ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho);

/// Matrix representation: liouvillian_matrix(model) * stack(rho) = stack(L rho)
/// in the column-major stacking convention of stack().
ComplexMatrix liouvillian_matrix(const LindbladModel& model);

struct NessResult {
  ComplexMatrix rho;      // Hermitian, trace 1, PSD within tolerance
  double residual = 0.0;  // ||L rho|| / ||rho||, Frobenius
  int nullity = 0;        // number of numerical null vectors of the generator
  bool unique = false;
};

struct NessOptions {
  Index dense_svd_max_dim = 64;  // full-space dimension above which inverse
                                 // iteration replaces the dense factorization
  double null_tol = 1e-10;       // relative singular-value threshold
  double psd_tol = 1e-9;         // allowed negative eigenvalue magnitude
};

/// Steady state: null vector of the generator, Hermitized and normalized to
/// trace 1. Requires gamma > 0. If the numerical nullity exceeds one, the
/// result carries unique = false and one representative.
NessResult ness(const LindbladModel& model, const NessOptions& opts = {});

struct SpectrumResult {
  ComplexVector eigenvalues;  // sorted by descending real part
  double gap = 0.0;           // -Re of the second eigenvalue
  double tau_relax = 0.0;     // 1 / gap
};

SpectrumResult spectrum(const LindbladModel& model);

/// 1 - tr(rho^2); zero iff rho is pure.
double purity_deficit(const ComplexMatrix& rho);

/// sqrt(<psi| rho |psi>).
double fidelity(const ComplexMatrix& rho, const PureState& target);

/// Fidelity of the H0-reduced state against a target living in H1.
double reduced_fidelity(const ComplexMatrix& rho, const PureState& target_h1,
                        const HilbertLayout& layout);

}  // namespace zeno
