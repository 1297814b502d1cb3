#pragma once

#include "zeno/hilbert.hpp"
#include "zeno/matrix.hpp"

namespace zeno {

/// Tensor product; the left factor carries the slowest-varying index.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

/// op acting on one tensor factor, identity on all others.
ComplexMatrix embed(const ComplexMatrix& op, int site, const HilbertLayout& layout);

/// Partial trace over H0: returns the d1 x d1 reduction of a (d0*d1)^2 matrix.
ComplexMatrix partial_trace_h0(const ComplexMatrix& x, const HilbertLayout& layout);

/// Nilpotent single-block jump operator: ones on the first superdiagonal,
/// J |e^j> = |e^{j-1}>, J |e^0> = 0. Requires d0 >= 2.
ComplexMatrix jordan_block(Index d0);

/// Local qubit state (cos(theta/2) e^{-i phi/2}, sin(theta/2) e^{i phi/2}).
PureState spinor(double theta, double phi);

/// u sigma^+ u^dag where u maps |up> to spinor(theta, phi); the unique dark
/// state of the associated single-site dissipator is spinor(theta, phi).
ComplexMatrix local_polarizer(double theta, double phi);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix sigma_plus();
ComplexMatrix sigma_minus();
ComplexMatrix identity(Index d);

}  // namespace zeno
