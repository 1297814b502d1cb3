#include "zeno/models.hpp"

#include <cmath>

#include "zeno/operators.hpp"

namespace zeno {

PureState full_target_state(const ModelBundle& bundle) {
  return PureState{bundle.model.layout.from_block(
      kron(bundle.zeno_state.amplitudes, bundle.target_state.amplitudes))};
}

CriterionReport criterion(const ModelBundle& bundle, double tol) {
  return check_criterion(bundle.model, bundle.zeno_state, bundle.target_state, tol);
}

BlockDecomposition decompose(const ModelBundle& bundle, const CriterionReport& crit) {
  const PureState* perp = std::abs(crit.kappa) > 0 ? &crit.zeno_perp : nullptr;
  return block_decompose(bundle.model.hamiltonian, bundle.zeno_state, bundle.target_state,
                         bundle.model.layout, perp);
}

// ---------------------------------------------------------------------------
// Bell targeting model (3 qubits)

namespace {

// Pseudo-random Hermitian filler. k^7 j^4 stays below 2^33 for the index
// range used here, so the tangent argument is computed exactly.
Complex bell_q(long long k, long long j) {
  static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  long long arg = 1;
  for (int p = 0; p < 7; ++p) arg *= k;
  long long j4 = j * j;
  j4 *= j4;
  arg *= j4;
  const double f = std::floor(7.0 * std::tan(static_cast<double>(arg)));
  double bit = std::fmod(f, 2.0);
  if (bit < 0) bit += 2.0;  // Euclidean remainder, stays in {0, 1}
  const int phase = static_cast<int>(((k - j) % 4 + 4) % 4);
  return ipow[phase] * (bit + 0.7);
}

ComplexMatrix unit2(Index r, Index c) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(r, c) = 1.0;
  return m;
}

// Basis of H1 anchored at the Bell state, columns in the computational
// ordering |a2 a3> with up = 0.
ComplexMatrix bell_basis() {
  ComplexMatrix v = ComplexMatrix::Zero(4, 4);
  const double s = 1.0 / std::sqrt(2.0);
  v(0, 0) = s;
  v(3, 0) = s;
  v(1, 1) = 1.0;
  v(2, 2) = 1.0;
  v(0, 3) = s;
  v(3, 3) = -s;
  return v;
}

ModelBundle bell3_assemble(double lambda, bool epsilon_variant, double epsilon, double gamma) {
  ComplexMatrix h00 = ComplexMatrix::Zero(4, 4);
  h00.diagonal() << lambda, -1.0, 3.0, 5.0;

  // h00, h01, h11 are the independent data; h10 enters as h01^dag through the
  // Hermitian assembly below, so the filler formula fixes h01 entries directly.
  ComplexMatrix h01(4, 4), h11(4, 4);
  for (Index a = 0; a < 4; ++a)
    for (Index b = 0; b < 4; ++b) {
      h01(a, b) = bell_q(a + 1, b + 5);
      h11(a, b) = 0.5 * (bell_q(a + 5, b + 5) + std::conj(bell_q(b + 5, a + 5)));
    }
  // targeting constraints on h10 = h01^dag: <0|h10|0> = 0.7, <a|h10|0> = 0
  h01.row(0) << 0.7, 0.0, 0.0, 0.0;
  if (epsilon_variant) {
    h01(1, 0) = epsilon;  // <0|h10|1>
    h01(2, 0) = 0.0;
    h01(3, 0) = 0.0;
  }

  const ComplexMatrix v = bell_basis();
  const ComplexMatrix h00c = v * h00 * v.adjoint();
  const ComplexMatrix h01c = v * h01 * v.adjoint();
  const ComplexMatrix h11c = v * hermitize(h11) * v.adjoint();

  ModelBundle b;
  b.model.layout = HilbertLayout::qubits(3, {0});
  b.model.hamiltonian = kron(unit2(0, 0), h00c) + kron(unit2(1, 1), h11c) +
                        kron(unit2(0, 1), h01c) + kron(unit2(1, 0), ComplexMatrix(h01c.adjoint()));
  b.model.jumps = {embed(sigma_plus(), 0, b.model.layout)};
  b.model.gamma = gamma;
  b.zeno_state = PureState{ComplexVector::Unit(2, 0)};
  b.target_state = PureState{v.col(0)};
  b.model.validate();
  return b;
}

}  // namespace

ModelBundle bell3_model(double lambda, double gamma) {
  return bell3_assemble(lambda, false, 0.0, gamma);
}

ModelBundle bell3_epsilon_model(double epsilon, double gamma) {
  return bell3_assemble(1.0, true, epsilon, gamma);
}

// ---------------------------------------------------------------------------
// Minimal (N+1)-qubit model

MinimalModelParams MinimalModelParams::fig4(int n) {
  MinimalModelParams p;
  p.n = n;
  const Index d1 = Index{1} << n;
  p.lambda.resize(d1);
  for (Index a = 0; a < d1; ++a)
    p.lambda(a) = 1.0 + static_cast<double>(a) + std::sqrt(static_cast<double>(a));
  p.kappa = 1.0;
  p.eta = ComplexVector::Ones(d1 - 1);
  p.d = RealVector::Zero(d1);
  return p;
}

void MinimalModelParams::validate() const {
  if (n < 1) throw ModelError("minimal model: n must be >= 1");
  const Index d1 = Index{1} << n;
  if (lambda.size() != d1) throw ModelError("minimal model: lambda must have 2^n entries");
  if (std::abs(kappa) == 0.0) throw ModelError("minimal model: kappa must be nonzero");
  if (eta.size() != d1 - 1) throw ModelError("minimal model: eta must have 2^n - 1 entries");
  for (Index a = 0; a < eta.size(); ++a)
    if (std::abs(eta(a)) == 0.0) throw ModelError("minimal model: every eta_a must be nonzero");
  if (d.size() != 0 && d.size() != d1)
    throw ModelError("minimal model: d must be empty or have 2^n entries");
}

ModelBundle minimal_model(const MinimalModelParams& p, double gamma) {
  p.validate();
  const Index d1 = Index{1} << p.n;
  const Index dim = 2 * d1;
  auto idx = [d1](Index e, Index a) { return e * d1 + a; };

  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (Index a = 0; a < d1; ++a) {
    h(idx(0, a), idx(0, a)) += p.lambda(a);
    if (p.d.size()) h(idx(1, a), idx(1, a)) += p.d(a);
  }
  h(idx(0, 0), idx(1, 0)) += p.kappa;
  h(idx(1, 0), idx(0, 0)) += std::conj(p.kappa);
  for (Index a = 0; a + 1 < d1; ++a) {
    h(idx(0, a + 1), idx(1, a)) += p.eta(a);
    h(idx(1, a), idx(0, a + 1)) += std::conj(p.eta(a));
  }
  if (p.d_offdiag.size())
    for (Index a = 1; a + 1 < d1; ++a)
      for (Index b = a + 1; b + 1 < d1; ++b) {
        h(idx(1, a), idx(1, b)) += p.d_offdiag(a, b);
        h(idx(1, b), idx(1, a)) += std::conj(p.d_offdiag(a, b));
      }

  ModelBundle bundle;
  bundle.model.layout = HilbertLayout::qubits(p.n + 1, {0});
  bundle.model.hamiltonian = std::move(h);
  bundle.model.jumps = {embed(sigma_plus(), 0, bundle.model.layout)};
  bundle.model.gamma = gamma;
  bundle.zeno_state = PureState{ComplexVector::Unit(2, 0)};
  bundle.target_state = PureState{ComplexVector::Unit(d1, 0)};
  bundle.model.validate();
  return bundle;
}

MinimalClosedNess minimal_closed_ness(const MinimalModelParams& p, double gamma) {
  p.validate();
  if (gamma <= 0) throw ModelError("minimal_closed_ness: gamma must be positive");
  const Index d1 = Index{1} << p.n;
  if (d1 < 2) throw ModelError("minimal_closed_ness: need at least one target qubit");
  const double l0 = p.lambda(0), l1 = p.lambda(1);
  if (l0 == l1) throw ModelError("minimal_closed_ness: lambda_0 = lambda_1");
  const Complex kappa = p.kappa, eta0 = p.eta(0);
  const double d0 = p.d.size() ? p.d(0) : 0.0;
  const double dl = l0 - l1;
  const double k2 = std::norm(kappa), e2 = std::norm(eta0);

  const double zeta_a = l0 * l0 - l0 * l1 - e2 - d0 * dl;
  const double zeta = zeta_a * zeta_a + k2 * (k2 + 2.0 * (dl * dl + e2));

  const Index dim = 2 * d1;
  auto idx = [d1](Index e, Index a) { return e * d1 + a; };
  auto put = [&](ComplexMatrix& m, Index r, Index c, Complex val) {
    m(r, c) += val;
    m(c, r) += std::conj(val);
  };

  ComplexMatrix rho1 = ComplexMatrix::Zero(dim, dim);
  put(rho1, idx(0, 0), idx(0, 1), 2.0 * kI * kappa * std::conj(eta0) / dl);
  put(rho1, idx(0, 0), idx(1, 0), 2.0 * kI * kappa);

  ComplexMatrix rho2 = ComplexMatrix::Zero(dim, dim);
  rho2(idx(0, 0), idx(0, 0)) = -4.0 * k2 * (k2 + e2 + dl * dl) / (dl * dl);
  rho2(idx(0, 1), idx(0, 1)) = 4.0 * k2 * (k2 + e2) / (dl * dl);
  rho2(idx(1, 0), idx(1, 0)) = 4.0 * k2;
  put(rho2, idx(0, 0), idx(0, 1),
      4.0 * kappa * std::conj(eta0) * (l0 * l0 - k2 - e2 - l0 * l1 - d0 * dl) / (dl * dl));
  put(rho2, idx(0, 1), idx(1, 0), 4.0 * kappa * std::conj(kappa) * eta0 / dl);
  put(rho2, idx(0, 0), idx(1, 0), 4.0 * kappa * (l0 * l0 - e2 - l0 * l1 - d0 * dl) / dl);

  MinimalClosedNess out;
  const double denom = 4.0 * zeta + dl * dl * gamma * gamma;
  out.rho = ComplexMatrix::Zero(dim, dim);
  out.rho(idx(0, 0), idx(0, 0)) = 1.0;
  out.rho += (dl * dl / denom) * (gamma * rho1 + rho2);
  out.gamma_ch = std::sqrt(8.0) * k2 / std::abs(dl);
  out.gamma_cr = 2.0 * std::sqrt(zeta) / std::abs(dl);
  out.fidelity = std::sqrt(1.0 - 4.0 * k2 * (dl * dl + k2 + e2) / denom);
  return out;
}

// ---------------------------------------------------------------------------
// Boundary-driven XXZ chain / spin-helix target

void HelixParams::validate() const {
  if (n < 3) throw ModelError("helix model: chain length must be >= 3");
}

ModelBundle helix_model(const HelixParams& p, double gamma) {
  p.validate();
  const double delta = std::cos(p.gamma_twist);
  ModelBundle b;
  b.model.layout = HilbertLayout::qubits(p.n, {0, p.n - 1});

  const Index dim = b.model.layout.dim();
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int j = 0; j + 1 < p.n; ++j) {
    h += embed(pauli_x(), j, b.model.layout) * embed(pauli_x(), j + 1, b.model.layout);
    h += embed(pauli_y(), j, b.model.layout) * embed(pauli_y(), j + 1, b.model.layout);
    // traceless bond convention: sz sz - 1 keeps the criterion eigenvalue at 0
    h += delta * (embed(pauli_z(), j, b.model.layout) * embed(pauli_z(), j + 1, b.model.layout) -
                  identity(dim));
  }
  b.model.hamiltonian = std::move(h);

  const double phi_last = p.gamma_twist * (p.n - 1);
  b.model.jumps = {embed(local_polarizer(p.theta, 0.0), 0, b.model.layout),
                   embed(local_polarizer(p.theta, phi_last), p.n - 1, b.model.layout)};
  b.model.gamma = gamma;

  b.zeno_state = kron(spinor(p.theta, 0.0), spinor(p.theta, phi_last));
  PureState target{ComplexVector::Ones(1)};
  for (int k = 2; k <= p.n - 1; ++k)
    target = kron(target, spinor(p.theta, p.gamma_twist * (k - 1)));
  b.target_state = target;
  if (p.n == 3)
    b.note = "n=3: both boundary dissipators act next to the single interior site";
  b.model.validate();
  return b;
}

}  // namespace zeno
