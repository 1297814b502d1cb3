#pragma once

#include "zeno/matrix.hpp"

namespace zeno {

struct HermitianEig {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // orthonormal columns
};

/// Requires is_hermitian(m, herm_tol); residual ||m v - w v|| <= 1e-9 ||m||.
HermitianEig hermitian_eig(const ComplexMatrix& m, double herm_tol = 1e-10);

struct GeneralEig {
  ComplexVector values;
  ComplexMatrix vectors;  // empty unless requested
};

GeneralEig general_eig(const ComplexMatrix& m, bool with_vectors = true);

/// Orthonormal basis (columns) of { v : ||m v|| <= tol ||m|| }.
ComplexMatrix null_space(const ComplexMatrix& m, double tol = 1e-10);

/// Solve m x = b for square nonsingular m; throws SolverError when rank
/// deficient instead of returning a truncated answer.
ComplexVector solve(const ComplexMatrix& m, const ComplexVector& b);

/// Minimum-norm least-squares solution of m x ~= b.
ComplexVector pseudo_solve(const ComplexMatrix& m, const ComplexVector& b,
                           double rank_tol = 1e-12);
ComplexMatrix pseudo_solve(const ComplexMatrix& m, const ComplexMatrix& b,
                           double rank_tol = 1e-12);

}  // namespace zeno
