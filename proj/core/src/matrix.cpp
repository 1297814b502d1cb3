#include "zeno/matrix.hpp"

#include <Eigen/Eigenvalues>

namespace zeno {

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(m.norm(), 1e-300);
  return (m - m.adjoint()).norm() <= tol * scale;
}

bool is_positive_semidefinite(const ComplexMatrix& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(m), Eigen::EigenvaluesOnly);
  const double scale = std::max(m.norm(), 1e-300);
  return es.eigenvalues().minCoeff() >= -tol * scale;
}

ComplexVector stack(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unstack(const ComplexVector& v, Index rows) {
  if (rows <= 0 || v.size() % rows != 0)
    throw DimensionError("unstack: vector length is not a multiple of the row count");
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, v.size() / rows);
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "trace_distance");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("trace_distance: shape mismatch");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(a - b), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace zeno
