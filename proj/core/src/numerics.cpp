#include "zeno/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace zeno {

HermitianEig hermitian_eig(const ComplexMatrix& m, double herm_tol) {
  require_square(m, "hermitian_eig");
  if (!is_hermitian(m, herm_tol))
    throw DimensionError("hermitian_eig: matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(m));
  if (es.info() != Eigen::Success)
    throw SolverError("hermitian_eig: eigensolver did not converge");
  return HermitianEig{es.eigenvalues(), es.eigenvectors()};
}

GeneralEig general_eig(const ComplexMatrix& m, bool with_vectors) {
  require_square(m, "general_eig");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, with_vectors);
  if (es.info() != Eigen::Success)
    throw SolverError("general_eig: eigensolver did not converge");
  GeneralEig out;
  out.values = es.eigenvalues();
  if (with_vectors) out.vectors = es.eigenvectors();
  return out;
}

namespace {

Eigen::BDCSVD<ComplexMatrix> thin_svd(const ComplexMatrix& m) {
  Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  // BDCSVD reports no failure mode through info() in Eigen 3.4; NaN output
  // would be caught by the callers' residual checks.
  return svd;
}

}  // namespace

ComplexMatrix null_space(const ComplexMatrix& m, double tol) {
  auto svd = thin_svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Index nullity = 0;
  for (Index i = sv.size() - 1; i >= 0; --i) {
    if (sv(i) <= tol * smax)
      ++nullity;
    else
      break;
  }
  if (smax == 0.0) nullity = m.cols();  // zero matrix
  return svd.matrixV().rightCols(nullity);
}

ComplexVector solve(const ComplexMatrix& m, const ComplexVector& b) {
  require_square(m, "solve");
  if (m.rows() != b.size()) throw DimensionError("solve: rhs dimension mismatch");
  Eigen::FullPivLU<ComplexMatrix> lu(m);
  if (!lu.isInvertible()) throw SolverError("solve: matrix is singular to working precision");
  return lu.solve(b);
}

ComplexVector pseudo_solve(const ComplexMatrix& m, const ComplexVector& b, double rank_tol) {
  return pseudo_solve(m, ComplexMatrix(b), rank_tol).col(0);
}

ComplexMatrix pseudo_solve(const ComplexMatrix& m, const ComplexMatrix& b, double rank_tol) {
  if (m.rows() != b.rows()) throw DimensionError("pseudo_solve: rhs dimension mismatch");
  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(m.rows(), m.cols());
  cod.setThreshold(rank_tol);
  cod.compute(m);
  return cod.solve(b);
}

}  // namespace zeno
