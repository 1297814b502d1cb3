#include "zeno/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>

#include "zeno/numerics.hpp"
#include "zeno/operators.hpp"

namespace zeno {

void LindbladModel::validate() const {
  require_square(hamiltonian, "LindbladModel");
  if (hamiltonian.rows() != layout.dim())
    throw ModelError("LindbladModel: Hamiltonian dimension does not match layout");
  if (!is_hermitian(hamiltonian, 1e-10))
    throw ModelError("LindbladModel: Hamiltonian is not Hermitian within 1e-10");
  if (gamma < 0) throw ModelError("LindbladModel: gamma must be nonnegative");
  for (const auto& l : jumps) {
    require_square(l, "LindbladModel jump");
    if (l.rows() != layout.dim())
      throw ModelError("LindbladModel: jump operator dimension mismatch");
  }
  if (!jump_scales.empty() && jump_scales.size() != jumps.size())
    throw ModelError("LindbladModel: jump_scales size mismatch");
}

ComplexMatrix apply_dissipator(const ComplexMatrix& l, const ComplexMatrix& rho) {
  require_square(l, "apply_dissipator");
  require_square(rho, "apply_dissipator");
  if (l.rows() != rho.rows()) throw DimensionError("apply_dissipator: dimension mismatch");
  const ComplexMatrix ldl = l.adjoint() * l;
  return l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
}

ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho) {
  ComplexMatrix out = -kI * commutator(model.hamiltonian, rho);
  for (std::size_t k = 0; k < model.jumps.size(); ++k)
    out += model.gamma * model.jump_scale(k) * apply_dissipator(model.jumps[k], rho);
  return out;
}

ComplexMatrix liouvillian_matrix(const LindbladModel& model) {
  model.validate();
  const Index d = model.layout.dim();
  const ComplexMatrix id = identity(d);
  // column-major stacking: stack(A X B) = (B^T kron A) stack(X)
  ComplexMatrix lm = -kI * (kron(id, model.hamiltonian) -
                            kron(model.hamiltonian.transpose(), id));
  for (std::size_t k = 0; k < model.jumps.size(); ++k) {
    const ComplexMatrix& l = model.jumps[k];
    const ComplexMatrix ldl = l.adjoint() * l;
    lm += model.gamma * model.jump_scale(k) *
          (kron(l.conjugate(), l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id));
  }
  return lm;
}

namespace {

struct NullPair {
  ComplexVector vec;
  int nullity;
  double sigma_min;
};

NullPair null_vector_dense(const ComplexMatrix& lm, double null_tol) {
  Eigen::BDCSVD<ComplexMatrix> svd(lm, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = std::max(sv(0), 1e-300);
  int nullity = 0;
  for (Index i = sv.size() - 1; i >= 0 && sv(i) <= null_tol * smax; --i) ++nullity;
  ComplexVector v = svd.matrixV().col(sv.size() - 1);

  // The SVD null vector carries an error ~ eps * smax / gap. When the
  // separation from the first nonzero singular value is marginal (very
  // strong dissipation: gap ~ 1/Gamma while ||L|| ~ Gamma), refine by
  // shifted inverse iteration.
  const Index next = sv.size() - 1 - std::max(nullity, 1);
  if (next >= 0 && sv(next) < 1e-6 * smax) {
    const Complex shift(1e-13 * smax, 0.0);
    Eigen::PartialPivLU<ComplexMatrix> lu(
        lm - shift * ComplexMatrix::Identity(lm.rows(), lm.cols()));
    for (int it = 0; it < 2; ++it) {
      v = lu.solve(v);
      v /= v.norm();
    }
  }
  return {v, std::max(nullity, 1), sv(sv.size() - 1)};
}

// Shifted inverse iteration targeting eigenvalue 0, for generators too large
// to factorize with a dense SVD comfortably. A second orthogonal start probes
// for kernel degeneracy.
NullPair null_vector_inverse_iteration(const ComplexMatrix& lm, double null_tol) {
  const Index n = lm.rows();
  const double scale = std::max(lm.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
  const Complex shift(1e-13 * scale, 0.0);
  Eigen::PartialPivLU<ComplexMatrix> lu(lm - shift * ComplexMatrix::Identity(n, n));

  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> gauss;
  auto random_vec = [&] {
    ComplexVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    return ComplexVector(v / v.norm());
  };

  auto iterate = [&](ComplexVector v) {
    double res = 1.0;
    for (int it = 0; it < 50 && res > null_tol * scale; ++it) {
      v = lu.solve(v);
      v /= v.norm();
      res = (lm * v).norm();
    }
    return std::pair(v, res);
  };

  auto [v1, res1] = iterate(random_vec());
  if (res1 > null_tol * scale)
    throw SolverError("ness: inverse iteration did not reach the null-space tolerance");

  ComplexVector probe = random_vec();
  probe -= v1 * v1.dot(probe);
  probe /= probe.norm();
  auto [v2, res2] = iterate(probe);
  v2 -= v1 * v1.dot(v2);
  const bool second = res2 <= 10 * null_tol * scale && v2.norm() > 1e-3;
  return {v1, second ? 2 : 1, res1};
}

}  // namespace

NessResult ness(const LindbladModel& model, const NessOptions& opts) {
  model.validate();
  if (model.gamma <= 0) throw ModelError("ness: gamma must be positive");
  const Index d = model.layout.dim();
  const ComplexMatrix lm = liouvillian_matrix(model);

  NullPair np = (d <= opts.dense_svd_max_dim) ? null_vector_dense(lm, opts.null_tol)
                                              : null_vector_inverse_iteration(lm, opts.null_tol);
  if (np.vec.norm() == 0.0) throw SolverError("ness: empty null space");

  ComplexMatrix rho = hermitize(unstack(np.vec, d));
  const double tr = rho.trace().real();
  if (std::abs(tr) < 1e-10 * rho.norm())
    throw SolverError("ness: null vector is traceless; cannot normalize a state");
  rho /= tr;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -opts.psd_tol)
    throw SolverError("ness: extracted state violates positivity beyond tolerance");

  NessResult out;
  out.rho = std::move(rho);
  out.residual = (lm * stack(out.rho)).norm() / stack(out.rho).norm();
  out.nullity = np.nullity;
  out.unique = (np.nullity == 1);
  return out;
}

SpectrumResult spectrum(const LindbladModel& model) {
  model.validate();
  if (model.gamma <= 0) throw ModelError("spectrum: gamma must be positive");
  GeneralEig eig = general_eig(liouvillian_matrix(model), false);

  std::vector<Index> order(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (eig.values(a).real() != eig.values(b).real())
      return eig.values(a).real() > eig.values(b).real();
    return eig.values(a).imag() > eig.values(b).imag();
  });

  SpectrumResult out;
  out.eigenvalues.resize(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) out.eigenvalues(i) = eig.values(order[i]);
  if (out.eigenvalues.size() > 1) {
    out.gap = -out.eigenvalues(1).real();
    out.tau_relax = out.gap != 0.0 ? 1.0 / out.gap : std::numeric_limits<double>::infinity();
  }
  return out;
}

double purity_deficit(const ComplexMatrix& rho) {
  require_square(rho, "purity_deficit");
  return 1.0 - (rho * rho).trace().real();
}

double fidelity(const ComplexMatrix& rho, const PureState& target) {
  require_square(rho, "fidelity");
  if (rho.rows() != target.dim()) throw DimensionError("fidelity: dimension mismatch");
  const double p = std::real(target.amplitudes.dot(rho * target.amplitudes));
  return std::sqrt(std::max(p, 0.0));
}

double reduced_fidelity(const ComplexMatrix& rho, const PureState& target_h1,
                        const HilbertLayout& layout) {
  if (target_h1.dim() != layout.d1())
    throw DimensionError("reduced_fidelity: target does not live in H1");
  return fidelity(partial_trace_h0(rho, layout), target_h1);
}

}  // namespace zeno
