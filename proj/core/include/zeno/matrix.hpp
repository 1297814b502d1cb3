#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace zeno {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;  // dense, column-major storage
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

/// Numerical solver failed or did not converge; never silently truncated.
struct SolverError : Error {
  using Error::Error;
};

/// Model construction or validation failed (non-Hermitian H, bad parameters, ...).
struct ModelError : Error {
  using Error::Error;
};

/// Input lies outside the image of the dissipator (nonzero partial trace in H0).
struct NotInImageError : Error {
  using Error::Error;
};

bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10);
bool is_positive_semidefinite(const ComplexMatrix& m, double tol = 1e-10);

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw DimensionError(std::string(what) + ": matrix is not square");
}

/// Column-major flattening of a matrix; the single stacking convention used
/// for all superoperator representations.
ComplexVector stack(const ComplexMatrix& m);
ComplexMatrix unstack(const ComplexVector& v, Index rows);

ComplexMatrix hermitize(const ComplexMatrix& m);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// 0.5 * sum of |eigenvalues| of (a - b); both arguments Hermitian.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace zeno
