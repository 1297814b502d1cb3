#include "zeno/operators.hpp"

#include <cmath>

namespace zeno {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, int site, const HilbertLayout& layout) {
  const auto& dims = layout.factor_dims();
  if (site < 0 || site >= static_cast<int>(dims.size()))
    throw DimensionError("embed: site out of range");
  require_square(op, "embed");
  if (op.rows() != dims[site]) throw DimensionError("embed: operator/factor dimension mismatch");
  Index left = 1, right = 1;
  for (int f = 0; f < site; ++f) left *= dims[f];
  for (int f = site + 1; f < static_cast<int>(dims.size()); ++f) right *= dims[f];
  return kron(kron(identity(left), op), identity(right));
}

ComplexMatrix partial_trace_h0(const ComplexMatrix& x, const HilbertLayout& layout) {
  require_square(x, "partial_trace_h0");
  if (x.rows() != layout.dim())
    throw DimensionError("partial_trace_h0: dimension mismatch with layout");
  const Index d0 = layout.d0(), d1 = layout.d1();
  const auto& perm = layout.block_permutation();
  ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
  for (Index a = 0; a < d1; ++a)
    for (Index b = 0; b < d1; ++b)
      for (Index j = 0; j < d0; ++j) out(a, b) += x(perm[j * d1 + a], perm[j * d1 + b]);
  return out;
}

ComplexMatrix jordan_block(Index d0) {
  if (d0 < 2) throw DimensionError("jordan_block: d0 must be >= 2");
  ComplexMatrix j = ComplexMatrix::Zero(d0, d0);
  for (Index i = 0; i + 1 < d0; ++i) j(i, i + 1) = 1.0;
  return j;
}

PureState spinor(double theta, double phi) {
  ComplexVector v(2);
  v << std::cos(theta / 2) * std::exp(Complex(0, -phi / 2)),
      std::sin(theta / 2) * std::exp(Complex(0, phi / 2));
  return PureState{std::move(v)};
}

ComplexMatrix local_polarizer(double theta, double phi) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const Complex em = std::exp(Complex(0, -phi / 2)), ep = std::exp(Complex(0, phi / 2));
  ComplexMatrix u(2, 2);
  u << c * em, -s * em, s * ep, c * ep;
  return u * sigma_plus() * u.adjoint();
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix sigma_plus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

ComplexMatrix sigma_minus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix identity(Index d) { return ComplexMatrix::Identity(d, d); }

}  // namespace zeno
