#include "zeno/zeno.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <utility>

#include "zeno/numerics.hpp"
#include "zeno/operators.hpp"

namespace zeno {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kDegeneracyTol = 1e-8;  // relative to ||h00||

// Multiply by a phase so the largest-magnitude entry is real positive.
ComplexVector phase_fixed(ComplexVector v) {
  Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex z = v(imax);
  if (std::abs(z) > 0) v *= std::conj(z) / std::abs(z);
  return v;
}

// Deterministic Gram-Schmidt completion of the given orthonormal columns to a
// full unitary, drawing candidates from the computational basis (largest
// residual first).
ComplexMatrix complete_basis(const ComplexMatrix& given) {
  const Index d = given.rows();
  ComplexMatrix u(d, d);
  Index have = given.cols();
  u.leftCols(have) = given;
  std::vector<char> used(d, 0);
  while (have < d) {
    Index best = -1;
    double best_norm = -1.0;
    ComplexVector best_vec;
    for (Index c = 0; c < d; ++c) {
      if (used[c]) continue;
      ComplexVector v = ComplexVector::Unit(d, c);
      v -= u.leftCols(have) * (u.leftCols(have).adjoint() * v);
      const double n = v.norm();
      if (n > best_norm + 1e-12) {
        best_norm = n;
        best = c;
        best_vec = v;
      }
    }
    if (best < 0 || best_norm < 1e-8)
      throw SolverError("complete_basis: could not complete orthonormal basis");
    used[best] = 1;
    u.col(have++) = phase_fixed(best_vec / best_norm);
  }
  return u;
}

ComplexMatrix unit_matrix(Index d, Index r, Index c) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(r, c) = 1.0;
  return m;
}

// Extract l from a block-basis operator of the form l (x) I_{d1}.
ComplexMatrix h0_restriction(const ComplexMatrix& jb, Index d0, Index d1) {
  ComplexMatrix l = ComplexMatrix::Zero(d0, d0);
  for (Index j = 0; j < d0; ++j)
    for (Index k = 0; k < d0; ++k) {
      Complex acc = 0.0;
      for (Index a = 0; a < d1; ++a) acc += jb(j * d1 + a, k * d1 + a);
      l(j, k) = acc / static_cast<double>(d1);
    }
  if ((jb - kron(l, identity(d1))).norm() > 1e-10 * std::max(jb.norm(), 1.0))
    throw ModelError("jump operator is not supported on H0 alone");
  return l;
}

ComplexMatrix trace_h0_block(const ComplexMatrix& x, Index d0, Index d1) {
  ComplexMatrix s = ComplexMatrix::Zero(d1, d1);
  for (Index a = 0; a < d1; ++a)
    for (Index b = 0; b < d1; ++b)
      for (Index j = 0; j < d0; ++j) s(a, b) += x(j * d1 + a, j * d1 + b);
  return s;
}

// |e^0><e^0| (x) m in the block basis.
ComplexMatrix kernel_embed(const ComplexMatrix& m, Index d0, Index d1) {
  ComplexMatrix x = ComplexMatrix::Zero(d0 * d1, d0 * d1);
  x.topLeftCorner(d1, d1) = m;
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// BlockDecomposition

const ComplexMatrix& BlockDecomposition::h(Index j, Index k) const {
  return blocks_.at(static_cast<std::size_t>(j * d0() + k));
}

ComplexMatrix BlockDecomposition::h_alpha(Index j, Index k) const {
  return alpha_basis_.adjoint() * h(j, k) * alpha_basis_;
}

ComplexMatrix BlockDecomposition::tilde_hamiltonian() const {
  const Index n0 = d0(), n1 = d1();
  ComplexMatrix ht = ComplexMatrix::Zero(n0 * n1, n0 * n1);
  for (Index j = 0; j < n0; ++j)
    for (Index k = 0; k < n0; ++k) ht.block(j * n1, k * n1, n1, n1) = h_alpha(j, k);
  return ht;
}

BlockDecomposition block_decompose(const ComplexMatrix& h, const PureState& psi_zeno,
                                   const PureState& psi_target, const HilbertLayout& layout,
                                   const PureState* zeno_perp, double tol) {
  require_square(h, "block_decompose");
  if (h.rows() != layout.dim()) throw DimensionError("block_decompose: H/layout mismatch");
  if (!is_hermitian(h, 1e-10)) throw ModelError("block_decompose: H is not Hermitian");
  if (psi_zeno.dim() != layout.d0() || psi_target.dim() != layout.d1())
    throw DimensionError("block_decompose: state dimensions do not match layout");
  psi_zeno.require_normalized(1e-9);
  psi_target.require_normalized(1e-9);

  const Index d0 = layout.d0(), d1 = layout.d1();

  ComplexMatrix seed(d0, zeno_perp ? 2 : 1);
  seed.col(0) = psi_zeno.amplitudes;
  if (zeno_perp) {
    ComplexVector p = zeno_perp->amplitudes;
    if (std::abs(psi_zeno.amplitudes.dot(p)) > 1e-8)
      throw ModelError("block_decompose: supplied zeno_perp is not orthogonal to psi_zeno");
    p -= psi_zeno.amplitudes * psi_zeno.amplitudes.dot(p);
    const double n = p.norm();
    if (n < 1e-8) throw ModelError("block_decompose: zeno_perp collapses onto psi_zeno");
    seed.col(1) = p / n;
  }
  const ComplexMatrix e_basis = complete_basis(seed);

  const ComplexMatrix hb = layout.to_block(h);
  const ComplexMatrix rot = kron(e_basis, identity(d1)).adjoint() * hb * kron(e_basis, identity(d1));

  BlockDecomposition out;
  out.e_basis_ = e_basis;
  out.blocks_.reserve(static_cast<std::size_t>(d0 * d0));
  for (Index j = 0; j < d0; ++j)
    for (Index k = 0; k < d0; ++k) out.blocks_.push_back(rot.block(j * d1, k * d1, d1, d1));

  const ComplexMatrix h00 = hermitize(out.blocks_[0]);
  const double h00_scale = std::max(h00.norm(), kTiny);

  // psi_target must be an eigenvector of h00
  const double lambda0 = std::real(psi_target.amplitudes.dot(h00 * psi_target.amplitudes));
  const ComplexVector evec_res = h00 * psi_target.amplitudes - lambda0 * psi_target.amplitudes;
  if (evec_res.norm() > tol * h00_scale)
    throw ModelError("block_decompose: psi_target is not an eigenvector of h00 (criterion violated)");

  // Diagonalize on the orthogonal complement of the target.
  const ComplexMatrix proj =
      identity(d1) - psi_target.amplitudes * psi_target.amplitudes.adjoint();
  HermitianEig eig = hermitian_eig(proj * h00 * proj, 1e-8);
  Index target_col = 0;
  (eig.vectors.adjoint() * psi_target.amplitudes).cwiseAbs().maxCoeff(&target_col);

  out.alpha_basis_.resize(d1, d1);
  out.lambda_.resize(d1);
  out.alpha_basis_.col(0) = psi_target.amplitudes;
  out.lambda_(0) = lambda0;
  Index a = 1;
  for (Index i = 0; i < d1; ++i) {
    if (i == target_col) continue;
    ComplexVector v = eig.vectors.col(i);
    v -= psi_target.amplitudes * psi_target.amplitudes.dot(v);
    out.alpha_basis_.col(a) = phase_fixed(v / v.norm());
    out.lambda_(a) = eig.values(i);
    ++a;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Targeting criterion

CriterionReport check_criterion(const ComplexMatrix& h, const PureState& psi_zeno,
                                const PureState& psi_target, const HilbertLayout& layout,
                                double tol) {
  require_square(h, "check_criterion");
  if (h.rows() != layout.dim()) throw DimensionError("check_criterion: H/layout mismatch");
  if (psi_zeno.dim() != layout.d0() || psi_target.dim() != layout.d1())
    throw DimensionError("check_criterion: state dimensions do not match layout");
  psi_zeno.require_normalized(1e-9);
  psi_target.require_normalized(1e-9);

  const Index d0 = layout.d0(), d1 = layout.d1();
  const ComplexMatrix hb = layout.to_block(h);
  const ComplexVector psi = kron(psi_zeno.amplitudes, psi_target.amplitudes);

  CriterionReport rep;
  rep.tol = tol;
  rep.h_norm = h.norm();
  const double scale = std::max(rep.h_norm, kTiny);

  rep.lambda = std::real(psi.dot(hb * psi));
  const ComplexVector r = hb * psi - rep.lambda * psi;

  // component of r of the form |v> (x) |psi_target>
  ComplexVector v = ComplexVector::Zero(d0);
  for (Index j = 0; j < d0; ++j)
    for (Index a = 0; a < d1; ++a)
      v(j) += std::conj(psi_target.amplitudes(a)) * r(j * d1 + a);
  v -= psi_zeno.amplitudes * psi_zeno.amplitudes.dot(v);

  const double vnorm = v.norm();
  if (vnorm > tol) {
    const ComplexVector perp = v / vnorm;
    rep.zeno_perp = PureState{perp};
    rep.kappa = perp.dot(v);  // = ||v||, phase fixed by the perp convention
  } else {
    rep.kappa = 0.0;
    ComplexMatrix seed(d0, 1);
    seed.col(0) = psi_zeno.amplitudes;
    rep.zeno_perp = PureState{complete_basis(seed).col(1)};
  }

  rep.residual_norm = (r - kron(v, psi_target.amplitudes)).norm();
  rep.strong_criterion = r.norm() <= tol * scale;
  rep.satisfied = rep.residual_norm <= tol * scale && std::abs(rep.kappa) > tol;
  return rep;
}

CriterionReport check_criterion(const LindbladModel& model, const PureState& psi_zeno,
                                const PureState& psi_target, double tol) {
  model.validate();
  CriterionReport rep =
      check_criterion(model.hamiltonian, psi_zeno, psi_target, model.layout, tol);
  const ComplexVector psi =
      model.layout.from_block(kron(psi_zeno.amplitudes, psi_target.amplitudes));
  double worst = 0.0;
  for (const auto& l : model.jumps) worst = std::max(worst, (l * psi).norm());
  rep.max_jump_residual = worst;
  if (!model.jumps.empty())
    rep.strong_criterion = rep.strong_criterion && worst <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Dissipator solver

DissipatorSolver::DissipatorSolver(std::vector<ComplexMatrix> h0_jumps, Index d1)
    : d1_(d1), jumps_(std::move(h0_jumps)) {
  if (jumps_.empty()) throw ModelError("DissipatorSolver: no jump operators");
  d0_ = jumps_.front().rows();
  for (const auto& l : jumps_) {
    require_square(l, "DissipatorSolver jump");
    if (l.rows() != d0_) throw DimensionError("DissipatorSolver: jump dimension mismatch");
  }
  superop_ = ComplexMatrix::Zero(d0_ * d0_, d0_ * d0_);
  const ComplexMatrix id = identity(d0_);
  for (const auto& l : jumps_) {
    const ComplexMatrix ldl = l.adjoint() * l;
    superop_ += kron(l.conjugate(), l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
  }
  cod_.compute(superop_);
  kernel_ = null_space(superop_, 1e-10);
  kernel_dim_ = kernel_.cols();
}

ComplexMatrix DissipatorSolver::kernel_matrix() const {
  if (kernel_dim_ == 0) throw SolverError("DissipatorSolver: empty kernel");
  return unstack(kernel_.col(0), d0_);
}

ComplexMatrix DissipatorSolver::apply(const ComplexMatrix& x) const {
  require_square(x, "DissipatorSolver::apply");
  if (x.rows() != d0_ * d1_) throw DimensionError("DissipatorSolver::apply: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  const ComplexMatrix id = identity(d1_);
  for (const auto& l : jumps_) out += apply_dissipator(kron(l, id), x);
  return out;
}

ComplexMatrix DissipatorSolver::inverse(const ComplexMatrix& x, double tol) const {
  require_square(x, "DissipatorSolver::inverse");
  if (x.rows() != d0_ * d1_)
    throw DimensionError("DissipatorSolver::inverse: dimension mismatch");

  // The dissipator acts on the H0 indices only; solve one d0^2 system per
  // (a, b) pair of H1 indices.
  ComplexMatrix rhs(d0_ * d0_, d1_ * d1_);
  for (Index a = 0; a < d1_; ++a)
    for (Index b = 0; b < d1_; ++b)
      for (Index k = 0; k < d0_; ++k)
        for (Index j = 0; j < d0_; ++j)
          rhs(j + k * d0_, a * d1_ + b) = x(j * d1_ + a, k * d1_ + b);

  const ComplexMatrix sol = cod_.solve(rhs);
  const double defect = (superop_ * sol - rhs).norm();
  if (defect > tol * std::max(rhs.norm(), kTiny))
    throw NotInImageError("dissipator inverse: operand is not in the image (tr_H0 != 0)");

  ComplexMatrix y(x.rows(), x.cols());
  for (Index a = 0; a < d1_; ++a)
    for (Index b = 0; b < d1_; ++b)
      for (Index k = 0; k < d0_; ++k)
        for (Index j = 0; j < d0_; ++j)
          y(j * d1_ + a, k * d1_ + b) = sol(j + k * d0_, a * d1_ + b);
  return y;
}

ComplexMatrix dissipator_inverse(const ComplexMatrix& x, const HilbertLayout& layout,
                                 double tol) {
  require_square(x, "dissipator_inverse");
  if (x.rows() != layout.dim()) throw DimensionError("dissipator_inverse: dimension mismatch");
  const ComplexMatrix pre = partial_trace_h0(x, layout);
  if (pre.norm() > 1e-9 * std::max(x.norm(), kTiny) && pre.norm() > 1e-9)
    throw NotInImageError("dissipator_inverse: tr_H0(x) != 0, not in the image");
  DissipatorSolver solver({jordan_block(layout.d0())}, layout.d1());
  return layout.from_block(solver.inverse(layout.to_block(x), tol));
}

// ---------------------------------------------------------------------------
// 1/Gamma expansion

namespace {

// Kernel entries that the secular equations at one order cannot fix through
// the commutator with h00: pairs (a, b) with lambda_a ~ lambda_b. They are
// determined one order later; "slots" enumerates their real degrees of
// freedom for a Hermitian kernel matrix.
struct FreeSlots {
  std::vector<Index> diag;                      // (a, a)
  std::vector<std::pair<Index, Index>> offdiag;  // (a, b), a < b
  int count = 0;                                // real unknowns

  static FreeSlots build(const RealVector& lambda, double degtol) {
    FreeSlots s;
    const Index d1 = lambda.size();
    for (Index a = 0; a < d1; ++a) s.diag.push_back(a);
    for (Index a = 0; a < d1; ++a)
      for (Index b = a + 1; b < d1; ++b)
        if (std::abs(lambda(a) - lambda(b)) <= degtol) s.offdiag.emplace_back(a, b);
    s.count = static_cast<int>(s.diag.size() + 2 * s.offdiag.size());
    return s;
  }

  ComplexMatrix matrix(const RealVector& u, Index d1) const {
    ComplexMatrix m = ComplexMatrix::Zero(d1, d1);
    int at = 0;
    for (Index a : diag) m(a, a) = u(at++);
    for (auto [a, b] : offdiag) {
      m(a, b) = Complex(u(at), u(at + 1));
      m(b, a) = std::conj(m(a, b));
      at += 2;
    }
    return m;
  }

  // Conditions carried by an anti-Hermitian secular matrix s on the free
  // slots; the (0,0) diagonal condition is replaced by the trace condition
  // supplied by the caller.
  RealVector conditions(const ComplexMatrix& s, double trace_value) const {
    RealVector r(count);
    int at = 0;
    for (Index a : diag) r(at++) = (a == 0) ? trace_value : std::imag(s(a, a));
    for (auto [a, b] : offdiag) {
      r(at++) = std::real(s(a, b));
      r(at++) = std::imag(s(a, b));
    }
    return r;
  }
};

struct ExpansionCore {
  Index d0, d1, d;
  ComplexMatrix ht;  // Hamiltonian in the (e x alpha) tilde basis
  RealVector lambda;
  const DissipatorSolver* diss;
  double degtol = 0.0;
  double hnorm = 1.0;

  FreeSlots slots;

  ComplexMatrix rho0, rho1, rho2;  // tilde basis
  ComplexMatrix m1, m2;
  RealVector q, mu;
  double gamma_ch_expansion = 0.0;
  double secular_residual[3] = {0, 0, 0};
  double order3_diag_residual = 0.0;

  ComplexMatrix secular(const ComplexMatrix& rho) const {
    return trace_h0_block(commutator(ht, rho), d0, d1);
  }

  ComplexMatrix next_particular(const ComplexMatrix& rho) const {
    return kI * diss->inverse(commutator(ht, rho), 1e-7);
  }

  // Fill the non-free kernel entries from S + [h00, m] = 0.
  ComplexMatrix solve_offdiag(const ComplexMatrix& s) const {
    ComplexMatrix m = ComplexMatrix::Zero(d1, d1);
    for (Index a = 0; a < d1; ++a)
      for (Index b = 0; b < d1; ++b) {
        const double gapl = lambda(a) - lambda(b);
        if (a == b || std::abs(gapl) <= degtol) continue;
        m(a, b) = -s(a, b) / gapl;
      }
    return hermitize(m);
  }

  // Solve the next-order secular conditions, affine in the free-slot vector,
  // together with the trace condition tr(rho_m) = 0.
  RealVector solve_free(const ComplexMatrix& particular, const ComplexMatrix& m_off) {
    auto conditions = [&](const RealVector& u) {
      const ComplexMatrix rho = particular + kernel_embed(m_off + slots.matrix(u, d1), d0, d1);
      const double trace_res = rho.trace().real();
      const ComplexMatrix s_next = secular(next_particular(rho));
      return slots.conditions(s_next, trace_res);
    };

    const RealVector base = conditions(RealVector::Zero(slots.count));
    RealMatrix a(slots.count, slots.count);
    for (int i = 0; i < slots.count; ++i)
      a.col(i) = conditions(RealVector::Unit(slots.count, i)) - base;

    Eigen::FullPivLU<RealMatrix> lu(a);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible())
      throw SingularExpansionError(
          "expansion: secular system is singular (det K ~ 0 or degenerate spectrum)");
    return lu.solve(-base);
  }

  void run() {
    for (Index a = 1; a < d1; ++a)
      if (std::abs(lambda(a) - lambda(0)) <= degtol)
        throw SingularExpansionError("expansion: lambda_0 is degenerate");

    slots = FreeSlots::build(lambda, degtol);
    const double h2 = std::max(hnorm * hnorm, kTiny);

    rho0 = unit_matrix(d, 0, 0);
    secular_residual[0] = secular(rho0).norm() / std::max(hnorm, kTiny);

    // order 1
    const ComplexMatrix p1 = next_particular(rho0);
    const ComplexMatrix s1 = secular(p1);
    const ComplexMatrix m1_off = solve_offdiag(s1);
    const RealVector u1 = solve_free(p1, m1_off);
    m1 = m1_off + slots.matrix(u1, d1);
    rho1 = hermitize(p1 + kernel_embed(m1, d0, d1));
    secular_residual[1] = secular(rho1).norm() / h2;

    mu.resize(d1 - 1);
    for (Index a = 1; a < d1; ++a) mu(a - 1) = std::real(m1(a, a));

    // order 2
    const ComplexMatrix p2 = next_particular(rho1);
    const ComplexMatrix s2 = secular(p2);
    const ComplexMatrix m2_off = solve_offdiag(s2);
    const RealVector u2 = solve_free(p2, m2_off);
    m2 = m2_off + slots.matrix(u2, d1);
    rho2 = hermitize(p2 + kernel_embed(m2, d0, d1));
    secular_residual[2] = secular(rho2).norm() / (h2 * std::max(hnorm, 1.0));

    // leftover third-order (0,0) component, diagnostic only
    order3_diag_residual =
        std::abs(std::imag(secular(next_particular(rho2))(0, 0))) / (h2 * h2);

    q.resize(d1 - 1);
    double sum_q = 0.0, sum_m2_diag = 0.0, sum_m1_row = 0.0;
    for (Index a = 1; a < d1; ++a) {
      q(a - 1) = std::real(m2(a, a)) - std::norm(m1(a, 0));
      sum_q += q(a - 1);
      sum_m2_diag += std::real(m2(a, a));
      sum_m1_row += std::norm(m1(0, a));
    }
    // purity route with the kernel diagonal in the trace-free convention
    const double g2 = -2.0 * sum_m1_row + 2.0 * sum_m2_diag;
    (void)sum_q;  // equals g2 / 2 up to roundoff
    gamma_ch_expansion = std::sqrt(std::max(g2, 0.0));
  }
};

ExpansionCore run_expansion(const BlockDecomposition& decomp, const DissipatorSolver& diss) {
  ExpansionCore core;
  core.d0 = decomp.d0();
  core.d1 = decomp.d1();
  core.d = core.d0 * core.d1;
  core.ht = decomp.tilde_hamiltonian();
  core.lambda = decomp.lambda();
  core.diss = &diss;
  core.hnorm = core.ht.norm();
  core.degtol = kDegeneracyTol * std::max(core.lambda.cwiseAbs().maxCoeff(), kTiny);
  core.run();
  return core;
}

DissipatorSolver model_dissipator(const LindbladModel& model, const BlockDecomposition& decomp) {
  const Index d0 = model.layout.d0(), d1 = model.layout.d1();
  std::vector<ComplexMatrix> h0_jumps;
  for (std::size_t k = 0; k < model.jumps.size(); ++k) {
    const ComplexMatrix jb =
        model.layout.to_block(model.jumps[k]) * std::sqrt(model.jump_scale(k));
    h0_jumps.push_back(decomp.e_basis().adjoint() * h0_restriction(jb, d0, d1) *
                       decomp.e_basis());
  }
  return DissipatorSolver(std::move(h0_jumps), d1);
}

}  // namespace

ExpansionTerms expansion_terms(const LindbladModel& model, const BlockDecomposition& decomp,
                               const CriterionReport& criterion) {
  model.validate();
  const Index d0 = decomp.d0(), d1 = decomp.d1(), d = d0 * d1;
  const ComplexMatrix w = kron(decomp.e_basis(), decomp.alpha_basis());

  auto to_original = [&](const ComplexMatrix& rho_tilde) {
    return model.layout.from_block(ComplexMatrix(w * rho_tilde * w.adjoint()));
  };

  if (!criterion.satisfied) {
    if (!criterion.strong_criterion)
      throw ModelError("expansion_terms: targeting criterion not satisfied");
    // Commuting case: the dark product state is an exact eigenstate and all
    // 1/Gamma corrections vanish.
    ExpansionTerms out;
    out.rho0 = to_original(unit_matrix(d, 0, 0));
    out.rho1 = ComplexMatrix::Zero(d, d);
    out.rho2 = ComplexMatrix::Zero(d, d);
    out.m1 = ComplexMatrix::Zero(d1, d1);
    out.m2 = ComplexMatrix::Zero(d1, d1);
    out.q = RealVector::Zero(d1 - 1);
    out.mu = RealVector::Zero(d1 - 1);
    return out;
  }

  DissipatorSolver diss = model_dissipator(model, decomp);
  if (diss.kernel_dim() != 1)
    throw ModelError("expansion_terms: dissipator kernel on H0 is not one-dimensional");

  ExpansionCore core = run_expansion(decomp, diss);

  ExpansionTerms out;
  out.rho0 = to_original(core.rho0);
  out.rho1 = to_original(core.rho1);
  out.rho2 = to_original(core.rho2);
  out.m1 = core.m1;
  out.m2 = core.m2;
  out.q = core.q;
  out.mu = core.mu;
  out.gamma_ch_expansion = core.gamma_ch_expansion;
  for (int i = 0; i < 3; ++i) out.secular_residual[i] = core.secular_residual[i];
  out.order3_diag_residual = core.order3_diag_residual;
  return out;
}

// ---------------------------------------------------------------------------
// Characteristic dissipative strength

namespace {

RealMatrix kernel_coefficient_matrix(const BlockDecomposition& decomp,
                                     std::vector<ComplexMatrix>* h_k0_out = nullptr) {
  const Index d0 = decomp.d0(), d1 = decomp.d1();
  RealMatrix k = RealMatrix::Zero(d1 - 1, d1 - 1);
  for (Index j = 1; j < d0; ++j) {
    const ComplexMatrix hk0 = decomp.h_alpha(j, 0);
    if (h_k0_out) h_k0_out->push_back(hk0);
    for (Index a = 1; a < d1; ++a) {
      double col_norm = 0.0;
      for (Index g = 0; g < d1; ++g) col_norm += std::norm(hk0(g, a));
      for (Index b = 1; b < d1; ++b) {
        k(a - 1, b - 1) += std::norm(hk0(a, b));
        if (a == b) k(a - 1, b - 1) -= col_norm;
      }
    }
  }
  return k;
}

GammaChReport gamma_ch_impl(const BlockDecomposition& decomp, const CriterionReport& criterion,
                            const DissipatorSolver& diss) {
  if (!criterion.satisfied && !criterion.strong_criterion)
    throw ModelError("gamma_ch: targeting criterion not satisfied");
  const Index d0 = decomp.d0(), d1 = decomp.d1();
  const RealVector& lambda = decomp.lambda();
  const double lscale = std::max(lambda.cwiseAbs().maxCoeff(), kTiny);
  constexpr double inf = std::numeric_limits<double>::infinity();

  GammaChReport rep;
  rep.K = kernel_coefficient_matrix(decomp);
  rep.det_K = (d1 > 1) ? rep.K.determinant() : 1.0;
  rep.det_h00_shifted = 1.0;
  for (Index a = 1; a < d1; ++a) {
    rep.det_h00_shifted *= lambda(a) - lambda(0);
    if (std::abs(lambda(a) - lambda(0)) <= kDegeneracyTol * lscale)
      rep.lambda0_degenerate = true;
  }
  if (!criterion.satisfied) {
    // commuting case: the dark product state is an exact eigenstate, the
    // purity deficit vanishes to all orders
    rep.gamma_ch_theorem = 0.0;
    rep.gamma_ch_expansion = 0.0;
    return rep;
  }
  const double kscale = std::max(rep.K.cwiseAbs().maxCoeff(), kTiny);
  const bool singular_k =
      std::abs(rep.det_K) <= 1e-10 * std::pow(kscale, static_cast<double>(d1 - 1));
  rep.divergent = rep.lambda0_degenerate || singular_k;

  if (rep.divergent) {
    rep.gamma_ch_theorem = inf;
    rep.gamma_ch_expansion = inf;
    return rep;
  }

  // closed-form route
  ComplexMatrix lam_res = ComplexMatrix::Zero(d1, d1);  // reduced resolvent
  for (Index a = 1; a < d1; ++a) lam_res(a, a) = 1.0 / (lambda(a) - lambda(0));
  const ComplexMatrix h01 = decomp.h_alpha(0, 1);
  ComplexMatrix f = ComplexMatrix::Zero(d1, d1);
  for (Index j = 1; j < d0; ++j)
    f += decomp.h_alpha(j, 1) + commutator(lam_res * h01, decomp.h_alpha(j, 0));
  RealVector r(d1 - 1);
  for (Index a = 1; a < d1; ++a) r(a - 1) = std::norm(f(a, 0));
  const double s =
      8.0 * std::norm(criterion.kappa) * rep.K.fullPivLu().solve(r).sum();
  rep.gamma_ch_theorem = std::sqrt(std::abs(s));

  try {
    rep.gamma_ch_expansion = run_expansion(decomp, diss).gamma_ch_expansion;
  } catch (const SingularExpansionError&) {
    rep.divergent = true;
    rep.gamma_ch_expansion = inf;
    return rep;
  }
  const double denom = std::max({rep.gamma_ch_theorem, rep.gamma_ch_expansion, kTiny});
  rep.route_deviation = std::abs(rep.gamma_ch_theorem - rep.gamma_ch_expansion) / denom;
  return rep;
}

}  // namespace

GammaChReport gamma_ch(const BlockDecomposition& decomp, const CriterionReport& criterion) {
  DissipatorSolver diss({jordan_block(decomp.d0())}, decomp.d1());
  return gamma_ch_impl(decomp, criterion, diss);
}

GammaChReport gamma_ch(const LindbladModel& model, const BlockDecomposition& decomp,
                       const CriterionReport& criterion) {
  DissipatorSolver diss = model_dissipator(model, decomp);
  return gamma_ch_impl(decomp, criterion, diss);
}

double gamma_ch_fit(const LindbladModel& model, const std::vector<double>& gammas) {
  if (gammas.size() < 3) throw ModelError("gamma_ch_fit: need at least 3 gamma points");
  for (double g : gammas)
    if (g <= 1.0) throw ModelError("gamma_ch_fit: gamma grid must satisfy gamma > 1");

  RealMatrix design(gammas.size(), 2);
  RealVector y(gammas.size());
  LindbladModel work = model;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    work.gamma = gammas[i];
    NessResult res = ness(work);
    if (!res.unique)
      throw SolverError("gamma_ch_fit: NESS is not unique at one of the grid points");
    y(i) = gammas[i] * gammas[i] * purity_deficit(res.rho);
    design(i, 0) = 1.0;
    design(i, 1) = 1.0 / gammas[i];
  }
  const RealVector coef = design.colPivHouseholderQr().solve(y);
  return std::sqrt(std::max(coef(0), 0.0));
}

SingularityScan singularity_scan(const BlockDecomposition& decomp) {
  const Index d0 = decomp.d0(), d1 = decomp.d1();
  const RealVector& lambda = decomp.lambda();
  const double lscale = std::max(lambda.cwiseAbs().maxCoeff(), kTiny);

  SingularityScan scan;
  for (Index a = 1; a < d1; ++a)
    if (std::abs(lambda(a) - lambda(0)) <= kDegeneracyTol * lscale)
      scan.lambda_poles.push_back(a);

  scan.d_values = RealVector::Zero(d1 - 1);
  for (Index j = 1; j < d0; ++j) {
    const ComplexMatrix hk0 = decomp.h_alpha(j, 0);
    for (Index a = 1; a < d1; ++a) scan.d_values(a - 1) += std::norm(hk0(0, a));
  }
  const double dscale = std::max(scan.d_values.maxCoeff(), 1.0);
  for (Index a = 1; a < d1; ++a)
    if (scan.d_values(a - 1) <= 1e-12 * dscale) scan.vanishing_d.push_back(a);

  scan.K = kernel_coefficient_matrix(decomp);
  scan.det_K = (d1 > 1) ? scan.K.determinant() : 1.0;

  const std::size_t nvanish = scan.vanishing_d.size();
  if (nvanish == 0) {
    scan.gershgorin = SingularityScan::Gershgorin::all_positive;
    scan.k_invertible = true;
  } else if (nvanish == static_cast<std::size_t>(d1 - 1)) {
    scan.gershgorin = SingularityScan::Gershgorin::all_zero;
    scan.k_invertible = false;
  } else {
    scan.gershgorin = SingularityScan::Gershgorin::mixed;
    const double kscale = std::max(scan.K.cwiseAbs().maxCoeff(), kTiny);
    scan.k_invertible =
        std::abs(scan.det_K) > 1e-10 * std::pow(kscale, static_cast<double>(d1 - 1));
  }
  return scan;
}

}  // namespace zeno
