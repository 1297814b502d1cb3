#pragma once

#include <string>

#include "zeno/lindblad.hpp"
#include "zeno/zeno.hpp"

namespace zeno {

/// A Lindblad model together with the states that define the targeting setup.
struct ModelBundle {
  LindbladModel model;
  PureState zeno_state;    // dark state in H0
  PureState target_state;  // desired state in H1
  std::string note;        // construction warnings, empty when clean
};

/// Full-space target psi_Zeno x psi_target, expressed in the original basis.
PureState full_target_state(const ModelBundle& bundle);

BlockDecomposition decompose(const ModelBundle& bundle, const CriterionReport& criterion);
CriterionReport criterion(const ModelBundle& bundle, double tol = 1e-9);

/// Three-qubit Bell targeting model: sigma^+ dissipation on qubit 1,
/// h_00 = diag(lambda, -1, 3, 5) in the Bell-anchored basis, <0|h10|0> = 0.7,
/// remaining entries from a fixed pseudo-random tangent formula.
ModelBundle bell3_model(double lambda, double gamma = 1.0);

/// Bell model at lambda = 1 with <0|h10|1> = epsilon and <0|h10|alpha> = 0
/// for alpha = 2, 3; the kernel coefficient matrix turns singular at
/// epsilon = 0.
ModelBundle bell3_epsilon_model(double epsilon, double gamma = 1.0);

/// Parameters of the (N+1)-qubit minimal targeting Hamiltonian.
struct MinimalModelParams {
  int n = 1;                // target register size; d1 = 2^n
  RealVector lambda;        // size 2^n
  Complex kappa{1.0, 0.0};  // must be nonzero
  ComplexVector eta;        // size 2^n - 1, all nonzero
  RealVector d;             // size 2^n
  ComplexMatrix d_offdiag;  // entries (a, b), 1 <= a < b <= 2^n - 2, else ignored

  /// lambda_a = 1 + a + sqrt(a), kappa = 1, eta = 1, d = 0, no off-diagonals.
  static MinimalModelParams fig4(int n);
  void validate() const;
};

ModelBundle minimal_model(const MinimalModelParams& p, double gamma = 1.0);

struct MinimalClosedNess {
  ComplexMatrix rho;
  double gamma_ch = 0.0;
  double gamma_cr = 0.0;
  double fidelity = 0.0;
};

/// Closed-form steady state of the minimal model (geometric resummation of
/// the 1/Gamma series), valid for arbitrary gamma > 0. Requires
/// lambda_0 != lambda_1.
MinimalClosedNess minimal_closed_ness(const MinimalModelParams& p, double gamma);

struct HelixParams {
  int n = 4;                 // chain length, >= 3
  double theta = 0.0;        // orbital angle
  double gamma_twist = 0.0;  // polar increment per bond; anisotropy = cos(gamma_twist)

  void validate() const;
};

/// Boundary-driven XXZ chain targeting the factorized spin-helix state.
/// H0 = sites {1, N} with two fully polarizing boundary dissipators; the
/// target is the interior helix. Bond terms use the traceless convention
/// sx sx + sy sy + cos(g) (sz sz - 1), which pins the criterion eigenvalue
/// at zero.
ModelBundle helix_model(const HelixParams& p, double gamma = 1.0);

}  // namespace zeno
