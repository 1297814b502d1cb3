#include <doctest.h>

#include "support/properties.hpp"
#include "support/test_support.hpp"
#include "zeno/numerics.hpp"
#include "zeno/operators.hpp"

using namespace zeno;
using zeno::testing::make_rng;
using zeno::testing::random_h0_traceless;
using zeno::testing::random_hermitian;

namespace {

ComplexMatrix ketbra(Index d, Index r, Index c) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(r, c) = 1.0;
  return m;
}

// The minimal-model two-qubit expansion terms evaluated from the closed
// formulas, fig4 parameters (kappa = eta_0 = 1, lambda_0 - lambda_1 = -2,
// d_0 = 0). Basis index = e * 2 + alpha.
ComplexMatrix minimal_rho1_oracle() {
  ComplexMatrix r = ComplexMatrix::Zero(4, 4);
  const Complex a = 2.0 * kI * 1.0 * 1.0 / (-2.0);  // 2 i kappa eta0* / (l0 - l1)
  const Complex b = 2.0 * kI * 1.0;                 // 2 i kappa
  r(0, 1) = a;
  r(1, 0) = std::conj(a);
  r(0, 2) = b;
  r(2, 0) = std::conj(b);
  return r;
}

ComplexMatrix minimal_rho2_oracle() {
  // evaluated termwise from the printed second-order matrix
  const double k2 = 1.0, e2 = 1.0, dl = -2.0, l0 = 1.0, l1 = 3.0, d0 = 0.0;
  ComplexMatrix r = ComplexMatrix::Zero(4, 4);
  r(0, 0) = -4.0 * k2 * (k2 + e2 + dl * dl) / (dl * dl);
  r(1, 1) = 4.0 * k2 * (k2 + e2) / (dl * dl);
  r(2, 2) = 4.0 * k2;
  auto put = [&](Index i, Index j, Complex v) {
    r(i, j) = v;
    r(j, i) = std::conj(v);
  };
  put(0, 1, 4.0 * (l0 * l0 - k2 - e2 - l0 * l1 - d0 * dl) / (dl * dl));
  put(1, 2, 4.0 / dl);
  put(0, 2, 4.0 * (l0 * l0 - e2 - l0 * l1 - d0 * dl) / dl);
  return r;
}

}  // namespace

TEST_SUITE_BEGIN("zeno");

TEST_CASE("block decomposition of the identity") {
  const HilbertLayout layout = HilbertLayout::bipartite(2, 3);
  const PureState zs{ComplexVector::Unit(2, 0)};
  const PureState ts{ComplexVector::Unit(3, 0)};
  const BlockDecomposition dec = block_decompose(identity(6), zs, ts, layout);
  for (Index j = 0; j < 2; ++j)
    for (Index k = 0; k < 2; ++k) {
      const ComplexMatrix expect = (j == k) ? identity(3) : ComplexMatrix::Zero(3, 3);
      CHECK((dec.h(j, k) - expect).norm() <= 1e-12);
    }
}

TEST_CASE("block decomposition of the minimal model") {
  auto bundle = minimal_model(MinimalModelParams::fig4(1));
  const CriterionReport crit = criterion(bundle);
  const BlockDecomposition dec = decompose(bundle, crit);
  CHECK(dec.lambda()(0) == doctest::Approx(1.0));
  CHECK(dec.lambda()(1) == doctest::Approx(3.0));
  // h01 = kappa |0><0| + eta_0 |1><0|
  ComplexMatrix h01_expect = ComplexMatrix::Zero(2, 2);
  h01_expect(0, 0) = 1.0;
  h01_expect(1, 0) = 1.0;
  CHECK((dec.h_alpha(0, 1) - h01_expect).norm() <= 1e-12);
  CHECK((dec.h_alpha(1, 1)).norm() <= 1e-12);  // d_alpha = 0
  // Hermiticity of the block grid
  CHECK((dec.h(0, 1).adjoint() - dec.h(1, 0)).norm() <= 1e-12);
}

TEST_CASE("block decomposition rejects a non-eigenvector target") {
  auto rng = make_rng(31);
  const HilbertLayout layout = HilbertLayout::bipartite(2, 3);
  const ComplexMatrix h = kron(identity(2), random_hermitian(rng, 3));
  ComplexVector t(3);
  t << 1, 1, 1;
  CHECK_THROWS_AS(
      block_decompose(h, PureState{ComplexVector::Unit(2, 0)}, PureState{t / t.norm()}, layout),
      ModelError);
}

TEST_CASE("criterion for a scalar Hamiltonian") {
  const HilbertLayout layout = HilbertLayout::bipartite(2, 2);
  const ComplexMatrix h = 2.5 * identity(4);
  const CriterionReport rep = check_criterion(h, PureState{ComplexVector::Unit(2, 0)},
                                              PureState{ComplexVector::Unit(2, 0)}, layout);
  CHECK(rep.lambda == doctest::Approx(2.5));
  CHECK(std::abs(rep.kappa) <= 1e-12);
  CHECK(rep.strong_criterion);
  CHECK_FALSE(rep.satisfied);  // nontriviality fails
}

TEST_CASE("criterion for the minimal model") {
  auto bundle = minimal_model(MinimalModelParams::fig4(1));
  const CriterionReport rep = criterion(bundle);
  CHECK(rep.satisfied);
  CHECK_FALSE(rep.strong_criterion);
  CHECK(rep.lambda == doctest::Approx(1.0));
  CHECK(std::abs(rep.kappa) == doctest::Approx(1.0));
  CHECK(rep.residual_norm <= 1e-12);
  CHECK(std::abs(bundle.zeno_state.amplitudes.dot(rep.zeno_perp.amplitudes)) <= 1e-12);
}

TEST_CASE("criterion for the helix matches the closed angle formula") {
  const HelixParams p{4, M_PI / 2, M_PI / 4};
  auto bundle = helix_model(p);
  const CriterionReport rep = criterion(bundle);
  CHECK(rep.satisfied);
  CHECK(std::abs(rep.lambda) <= 1e-9 * rep.h_norm);
  CHECK(std::abs(rep.kappa) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("criterion structure: <gamma|h_k0|0> = kappa delta_k1 delta_gamma0") {
  for (const auto& z : zeno::testing::nonsingular_zoo()) {
    const CriterionReport crit = criterion(z.bundle);
    REQUIRE(crit.satisfied);
    const BlockDecomposition dec = decompose(z.bundle, crit);
    INFO(z.name);
    for (Index k = 1; k < dec.d0(); ++k) {
      const ComplexMatrix hk0 = dec.h_alpha(k, 0);
      for (Index g = 0; g < dec.d1(); ++g) {
        const Complex expect = (k == 1 && g == 0) ? crit.kappa : Complex(0, 0);
        CHECK(std::abs(hk0(g, 0) - expect) <= 1e-9 * std::max(1.0, crit.h_norm));
      }
    }
  }
}

TEST_CASE("reduced resolvent identity") {
  for (const auto& z : zeno::testing::nonsingular_zoo()) {
    const CriterionReport crit = criterion(z.bundle);
    const BlockDecomposition dec = decompose(z.bundle, crit);
    const Index d1 = dec.d1();
    ComplexMatrix lam_res = ComplexMatrix::Zero(d1, d1);
    for (Index a = 1; a < d1; ++a) lam_res(a, a) = 1.0 / (dec.lambda()(a) - dec.lambda()(0));
    ComplexMatrix h00_alpha = ComplexMatrix::Zero(d1, d1);
    h00_alpha.diagonal() = dec.lambda();
    const ComplexMatrix lhs = lam_res * (h00_alpha - dec.lambda()(0) * identity(d1));
    ComplexMatrix expect = identity(d1);
    expect(0, 0) = 0.0;
    INFO(z.name);
    CHECK((lhs - expect).norm() <= 1e-9);
  }
}

TEST_CASE("dissipator inverse of a simple coherence") {
  const HilbertLayout layout = HilbertLayout::bipartite(2, 1);
  const ComplexMatrix x = ketbra(2, 1, 0);
  const ComplexMatrix y = dissipator_inverse(x, layout);
  CHECK((y + 2.0 * x).norm() <= 1e-12);
}

TEST_CASE("dissipator inverse rejects operands with nonzero partial trace") {
  const HilbertLayout layout = HilbertLayout::bipartite(2, 1);
  CHECK_THROWS_AS(dissipator_inverse(ketbra(2, 0, 0), layout), NotInImageError);
}

TEST_CASE("dissipator inverse round trip on random traceless operands") {
  auto rng = make_rng(32);
  for (Index d0 : {Index{2}, Index{3}}) {
    const HilbertLayout layout = HilbertLayout::bipartite(d0, 2);
    DissipatorSolver solver({jordan_block(d0)}, 2);
    for (int s = 0; s < 20; ++s) {
      const ComplexMatrix x = layout.to_block(random_h0_traceless(rng, layout));
      const ComplexMatrix y = solver.inverse(x, 1e-9);
      CHECK((solver.apply(y) - x).norm() <= 1e-10 * x.norm());
      // minimum-norm solution carries no |e0><e0| kernel component
      ComplexMatrix ker_part = ComplexMatrix::Zero(layout.d1(), layout.d1());
      for (Index a = 0; a < layout.d1(); ++a)
        for (Index b = 0; b < layout.d1(); ++b) ker_part(a, b) = y(a, b);
      CHECK(ker_part.norm() <= 1e-10 * y.norm());
    }
  }
}

TEST_CASE("dissipator kernel dimensions") {
  CHECK(zeno::testing::check_kernel_dimension().empty());
}

TEST_CASE("expansion terms of the minimal model reproduce the closed forms") {
  auto bundle = minimal_model(MinimalModelParams::fig4(1));
  const CriterionReport crit = criterion(bundle);
  const BlockDecomposition dec = decompose(bundle, crit);
  const ExpansionTerms terms = expansion_terms(bundle.model, dec, crit);

  CHECK((terms.rho0 - ketbra(4, 0, 0)).norm() <= 1e-12);
  CHECK((terms.rho1 - minimal_rho1_oracle()).norm() <= 1e-10);
  CHECK((terms.rho2 - minimal_rho2_oracle()).norm() <= 1e-9);
  CHECK(std::abs(terms.rho1.trace()) <= 1e-12);
  CHECK(std::abs(terms.rho2.trace()) <= 1e-11);

  REQUIRE(terms.q.size() == 1);
  CHECK(terms.q(0) == doctest::Approx(1.0));
  CHECK(terms.mu.cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(std::abs(terms.m1(0, 0)) <= 1e-10);  // M^(1)_00 = 0
  CHECK(terms.gamma_ch_expansion == doctest::Approx(std::sqrt(2.0)));
  for (int m = 0; m < 3; ++m) CHECK(terms.secular_residual[m] <= 1e-10);
  CHECK(terms.order3_diag_residual <= 1e-10);
}

TEST_CASE("expansion kernel matrix matches the printed first-order solution") {
  // M^(1) = 2i |e0><e0| (x) (Lam h01 h10 Phi - Phi h01 h10 Lam)
  for (const auto& z : zeno::testing::nonsingular_zoo()) {
    if (!z.single_jump) continue;
    const CriterionReport crit = criterion(z.bundle);
    const BlockDecomposition dec = decompose(z.bundle, crit);
    const ExpansionTerms terms = expansion_terms(z.bundle.model, dec, crit);
    const Index d1 = dec.d1();
    ComplexMatrix lam_res = ComplexMatrix::Zero(d1, d1);
    for (Index a = 1; a < d1; ++a) lam_res(a, a) = 1.0 / (dec.lambda()(a) - dec.lambda()(0));
    const ComplexMatrix h01 = dec.h_alpha(0, 1), h10 = dec.h_alpha(1, 0);
    const ComplexMatrix phi = ketbra(d1, 0, 0);
    const ComplexMatrix m1_expect =
        2.0 * kI * (lam_res * h01 * h10 * phi - phi * h01 * h10 * lam_res);
    INFO(z.name);
    CHECK((terms.m1 - m1_expect).norm() <= 1e-8 * std::max(1.0, m1_expect.norm()));
  }
}

TEST_CASE("expansion of a commuting model is trivial") {
  // H = sz sz with L = sigma+ on qubit 1: strong criterion, kappa = 0
  LindbladModel model;
  model.layout = HilbertLayout::qubits(2, {0});
  model.hamiltonian = embed(pauli_z(), 0, model.layout) * embed(pauli_z(), 1, model.layout);
  model.jumps = {embed(sigma_plus(), 0, model.layout)};
  model.gamma = 1.0;
  const PureState zs{ComplexVector::Unit(2, 0)};
  const PureState ts{ComplexVector::Unit(2, 0)};
  const CriterionReport crit = check_criterion(model, zs, ts);
  CHECK(crit.strong_criterion);
  CHECK_FALSE(crit.satisfied);
  const BlockDecomposition dec = block_decompose(model.hamiltonian, zs, ts, model.layout);
  const ExpansionTerms terms = expansion_terms(model, dec, crit);
  CHECK(terms.rho1.norm() == 0.0);
  CHECK(terms.rho2.norm() == 0.0);
  CHECK(terms.gamma_ch_expansion == 0.0);
}

TEST_CASE("secular conditions hold on all expansion outputs") {
  CHECK(zeno::testing::check_secular_conditions(zeno::testing::nonsingular_zoo(), 1e-8).empty());
}

TEST_CASE("expansion refuses singular models") {
  for (const auto& z : zeno::testing::singular_zoo()) {
    const CriterionReport crit = criterion(z.bundle);
    REQUIRE(crit.satisfied);
    const BlockDecomposition dec = decompose(z.bundle, crit);
    INFO(z.name);
    CHECK_THROWS_AS(expansion_terms(z.bundle.model, dec, crit), SingularExpansionError);
  }
}

TEST_CASE("gamma_ch on the minimal model: all routes equal sqrt(2)") {
  auto bundle = minimal_model(MinimalModelParams::fig4(1));
  const CriterionReport crit = criterion(bundle);
  const BlockDecomposition dec = decompose(bundle, crit);
  const GammaChReport rep = gamma_ch(bundle.model, dec, crit);
  const double expect = std::sqrt(8.0) * 1.0 / 2.0;  // sqrt(8) |kappa|^2 / |l0 - l1|
  CHECK_FALSE(rep.divergent);
  CHECK(std::abs(rep.gamma_ch_theorem - expect) <= 1e-9);
  CHECK(std::abs(rep.gamma_ch_expansion - expect) <= 1e-9);
  const double fit = gamma_ch_fit(bundle.model, {100.0, 200.0, 400.0});
  CHECK(std::abs(fit - expect) <= 0.01 * expect);
}

TEST_CASE("gamma_ch diverges at a spectral degeneracy") {
  auto bundle = bell3_model(3.0);  // lambda_0 = lambda_2
  const CriterionReport crit = criterion(bundle);
  const BlockDecomposition dec = decompose(bundle, crit);
  const GammaChReport rep = gamma_ch(bundle.model, dec, crit);
  CHECK(rep.lambda0_degenerate);
  CHECK(rep.divergent);
  CHECK(std::isinf(rep.gamma_ch_theorem));
}

TEST_CASE("gamma_ch flags a singular kernel coefficient matrix") {
  auto bundle = bell3_epsilon_model(0.0);
  const CriterionReport crit = criterion(bundle);
  CHECK(crit.satisfied);
  CHECK(std::abs(crit.kappa) == doctest::Approx(0.7));
  const BlockDecomposition dec = decompose(bundle, crit);
  const GammaChReport rep = gamma_ch(bundle.model, dec, crit);
  CHECK_FALSE(rep.lambda0_degenerate);
  CHECK(std::abs(rep.det_K) <= 1e-12);
  CHECK(rep.divergent);
}

TEST_CASE("three gamma_ch routes agree on single-jump zoo models") {
  for (const auto& z : zeno::testing::nonsingular_zoo()) {
    if (!z.single_jump) continue;
    const CriterionReport crit = criterion(z.bundle);
    const BlockDecomposition dec = decompose(z.bundle, crit);
    const GammaChReport rep = gamma_ch(z.bundle.model, dec, crit);
    INFO(std::string(z.name));
    REQUIRE_FALSE(rep.divergent);
    CHECK(rep.route_deviation <= 1e-8);
    // gammas well above both Gamma_ch and the Hamiltonian scale so the
    // 1/Gamma tail does not bias the fit
    const double base = std::max(4000.0, 100.0 * rep.gamma_ch_expansion);
    const double fit = gamma_ch_fit(z.bundle.model, {base, 2 * base, 4 * base});
    CHECK(std::abs(fit - rep.gamma_ch_expansion) <= 0.02 * rep.gamma_ch_expansion);
  }
}

TEST_CASE("expansion route matches the numeric fit for the composite helix dissipator") {
  // The closed-form route assumes a single jump; for the two boundary
  // polarizers the expansion route is the authoritative one and must match
  // the fit.
  for (const auto& z : zeno::testing::nonsingular_zoo()) {
    if (z.single_jump) continue;
    const CriterionReport crit = criterion(z.bundle);
    const BlockDecomposition dec = decompose(z.bundle, crit);
    const GammaChReport rep = gamma_ch(z.bundle.model, dec, crit);
    INFO(std::string(z.name));
    REQUIRE_FALSE(rep.divergent);
    const double base = std::max(1000.0, 100.0 * rep.gamma_ch_expansion);
    const double fit = gamma_ch_fit(z.bundle.model, {base, 2 * base, 4 * base});
    CHECK(std::abs(fit - rep.gamma_ch_expansion) <= 0.02 * rep.gamma_ch_expansion);
  }
}

TEST_CASE("gamma_ch_fit of a commuting model is zero") {
  // kappa = 0 variant of the minimal model; the eta couplings keep the
  // steady state unique, so the dark product state is exact at every gamma.
  LindbladModel model;
  model.layout = HilbertLayout::qubits(2, {0});
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h.diagonal() << 1.0, 3.0, 0.0, 0.0;  // lambda_0, lambda_1, d_0, d_1
  h(1, 2) = 1.0;                       // eta_0 |e0 1><e1 0| + h.c.
  h(2, 1) = 1.0;
  model.hamiltonian = h;
  model.jumps = {embed(sigma_plus(), 0, model.layout)};
  model.gamma = 1.0;
  const CriterionReport crit = check_criterion(model, PureState{ComplexVector::Unit(2, 0)},
                                               PureState{ComplexVector::Unit(2, 0)});
  CHECK(crit.strong_criterion);
  CHECK(std::abs(crit.kappa) <= 1e-12);
  CHECK(gamma_ch_fit(model, {50.0, 100.0, 200.0}) <= 1e-6);
}

TEST_CASE("gamma_ch_fit input validation") {
  auto bundle = minimal_model(MinimalModelParams::fig4(1));
  CHECK_THROWS_AS(gamma_ch_fit(bundle.model, {100.0, 200.0}), ModelError);
  CHECK_THROWS_AS(gamma_ch_fit(bundle.model, {0.5, 100.0, 200.0}), ModelError);
}

TEST_CASE("singularity scan classifications") {
  {
    auto bundle = minimal_model(MinimalModelParams::fig4(1));
    const SingularityScan scan = singularity_scan(decompose(bundle, criterion(bundle)));
    CHECK(scan.lambda_poles.empty());
    CHECK(scan.d_values(0) == doctest::Approx(1.0));  // |eta_0|^2
    CHECK(scan.gershgorin == SingularityScan::Gershgorin::all_positive);
    CHECK(scan.k_invertible);
  }
  {
    auto bundle = bell3_epsilon_model(0.0);
    const SingularityScan scan = singularity_scan(decompose(bundle, criterion(bundle)));
    CHECK(scan.vanishing_d.size() == 3);
    CHECK(scan.gershgorin == SingularityScan::Gershgorin::all_zero);
    CHECK_FALSE(scan.k_invertible);
    CHECK(std::abs(scan.det_K) <= 1e-12);
  }
  {
    auto bundle = bell3_model(1.0);
    const SingularityScan scan = singularity_scan(decompose(bundle, criterion(bundle)));
    CHECK(scan.lambda_poles.empty());
    CHECK(scan.k_invertible);
    CHECK(std::abs(scan.det_K) > 1e-6);
  }
}

TEST_CASE("K matrix identities on the zoo") {
  CHECK(zeno::testing::check_k_matrix(zeno::testing::nonsingular_zoo(), 1e-9).empty());
}

TEST_CASE("noncommutativity witness on the zoo") {
  CHECK(zeno::testing::check_noncommutativity_witness(zeno::testing::nonsingular_zoo(), 1e-9)
            .empty());
}

TEST_CASE("minimal model expansion matches the numeric steady state to third order") {
  auto bundle = minimal_model(MinimalModelParams::fig4(1));
  const CriterionReport crit = criterion(bundle);
  const BlockDecomposition dec = decompose(bundle, crit);
  const ExpansionTerms terms = expansion_terms(bundle.model, dec, crit);
  auto residual = [&](double g) {
    LindbladModel model = bundle.model;
    model.gamma = g;
    const NessResult nr = ness(model);
    return (nr.rho - (terms.rho0 + terms.rho1 / g + terms.rho2 / (g * g))).norm();
  };
  const double r1 = residual(1e3), r3 = residual(3e3);
  CHECK(r1 / r3 == doctest::Approx(27.0).epsilon(0.2));
}

TEST_SUITE_END();
