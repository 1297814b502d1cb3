// Acceptance suite: one integration check per numbered criterion, each
// printing a single [PASS]/[FAIL] line. Run with no arguments for the full
// suite or with a list of criterion numbers.

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support/properties.hpp"
#include "support/test_support.hpp"
#include "zeno/numerics.hpp"
#include "zeno/operators.hpp"

using namespace zeno;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  Outcome out;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      out.pass = false;
      if (!out.detail.empty()) out.detail += "; ";
      out.detail += what;
    }
  }
  void note(const std::string& what) {
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += what;
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// 1. Numeric NESS vs the closed-form resummation of the minimal model.
Outcome criterion_1() {
  Check c;
  double worst = 0;
  for (int n : {1, 2, 3}) {
    const MinimalModelParams p = MinimalModelParams::fig4(n);
    auto bundle = minimal_model(p, 1.0);
    for (double g : {1.0, 5.0, 10.0, 100.0}) {
      bundle.model.gamma = g;
      const NessResult nr = ness(bundle.model);
      c.require(nr.unique, "NESS not unique at n=" + std::to_string(n));
      const double dist = trace_distance(nr.rho, minimal_closed_ness(p, g).rho);
      worst = std::max(worst, dist);
    }
  }
  c.require(worst <= 1e-8, "worst trace distance " + num(worst) + " > 1e-8");
  c.note("worst trace distance " + num(worst));
  return c.out;
}

// 2. Three Gamma_ch routes coincide on the minimal model.
Outcome criterion_2() {
  Check c;
  auto bundle = minimal_model(MinimalModelParams::fig4(1));
  const CriterionReport crit = criterion(bundle);
  const GammaChReport rep = gamma_ch(bundle.model, decompose(bundle, crit), crit);
  const double expect = std::sqrt(8.0) * std::norm(crit.kappa) / 2.0;  // = sqrt(2)
  c.require(std::abs(rep.gamma_ch_theorem - expect) <= 1e-9,
            "theorem route " + num(rep.gamma_ch_theorem));
  c.require(std::abs(rep.gamma_ch_expansion - expect) <= 1e-9,
            "expansion route " + num(rep.gamma_ch_expansion));
  const double fit = gamma_ch_fit(bundle.model, {100.0, 200.0, 400.0});
  c.require(std::abs(fit - std::sqrt(2.0)) <= 0.01 * std::sqrt(2.0), "fit route " + num(fit));
  c.note("theorem " + num(rep.gamma_ch_theorem) + ", expansion " +
         num(rep.gamma_ch_expansion) + ", fit " + num(fit));
  return c.out;
}

// 3. Closed-form and numeric fidelity at gamma = 10.
Outcome criterion_3() {
  Check c;
  const MinimalModelParams p = MinimalModelParams::fig4(1);
  const double expect = std::sqrt(0.95);
  const double closed = minimal_closed_ness(p, 10.0).fidelity;
  c.require(std::abs(closed - expect) <= 1e-8, "closed form " + num(closed));
  auto bundle = minimal_model(p, 10.0);
  const double numeric = fidelity(ness(bundle.model).rho, full_target_state(bundle));
  c.require(std::abs(numeric - expect) <= 1e-6, "numeric " + num(numeric));
  c.note("closed " + num(closed) + ", numeric " + num(numeric));
  return c.out;
}

// 4. Power laws of the fidelity deficit and the spectral gap.
Outcome criterion_4() {
  Check c;
  std::vector<double> gammas;
  for (int i = 0; i <= 6; ++i) gammas.push_back(std::pow(10.0, 2.0 + i / 3.0));

  std::vector<std::vector<double>> one_minus_f(4), gap(4), tau(4);
  for (int n : {1, 2, 3}) {
    auto bundle = minimal_model(MinimalModelParams::fig4(n), 1.0);
    for (double g : gammas) {
      bundle.model.gamma = g;
      one_minus_f[n].push_back(1.0 - fidelity(ness(bundle.model).rho, full_target_state(bundle)));
      const double gp = spectrum(bundle.model).gap;
      gap[n].push_back(gp);
      tau[n].push_back(1.0 / gp);
    }
    const double slope_f = loglog_slope(gammas, one_minus_f[n]);
    const double slope_gap = loglog_slope(gammas, gap[n]);
    c.require(std::abs(slope_f + 2.0) <= 0.05,
              "n=" + std::to_string(n) + " 1-F slope " + num(slope_f));
    c.require(std::abs(slope_gap + 1.0) <= 0.05,
              "n=" + std::to_string(n) + " gap slope " + num(slope_gap));
    if (n == 1) c.note("1-F slope " + num(slope_f) + ", gap slope " + num(slope_gap));

    // tau ~ (1-F)^(-1/2)
    const double expo = loglog_slope(one_minus_f[n], tau[n]);
    c.require(std::abs(expo + 0.5) <= 0.03, "n=" + std::to_string(n) + " tau exponent " + num(expo));
    if (n == 1) c.note("tau exponent " + num(expo));
  }
  // 1-F curves coincide across n within 1%
  for (std::size_t i = 0; i < gammas.size(); ++i)
    for (int n : {2, 3}) {
      const double rel = std::abs(one_minus_f[n][i] / one_minus_f[1][i] - 1.0);
      c.require(rel <= 0.01, "1-F spread " + num(rel) + " at gamma " + num(gammas[i]));
    }
  return c.out;
}

// 5. Bell model: divergences only at the spectral degeneracies; fidelity
// plateau away from them, dips at them.
Outcome criterion_5() {
  Check c;
  const std::vector<double> singular = {-1.0, 3.0, 5.0};
  double worst_plateau = 1.0;
  for (int i = 0; i < 50; ++i) {
    const double lam = -3.0 + 10.0 * i / 49.0;
    double dist = 1e9;
    for (double s : singular) dist = std::min(dist, std::abs(lam - s));

    auto bundle = bell3_model(lam, 1000.0);
    const CriterionReport crit = criterion(bundle);
    const GammaChReport rep = gamma_ch(bundle.model, decompose(bundle, crit), crit);
    const bool near_singular = dist <= 1e-8 * 5.0;
    c.require(rep.divergent == near_singular,
              "divergent flag at lambda " + num(lam) + " (distance " + num(dist) + ")");
    if (!near_singular)
      c.require(std::isfinite(rep.gamma_ch_theorem), "gamma_ch not finite at " + num(lam));
    if (dist > 0.5) {
      const double f =
          reduced_fidelity(ness(bundle.model).rho, bundle.target_state, bundle.model.layout);
      worst_plateau = std::min(worst_plateau, f);
    }
  }
  c.require(worst_plateau >= 0.99, "plateau fidelity " + num(worst_plateau) + " < 0.99");
  c.note("plateau min " + num(worst_plateau));

  std::string dips;
  for (double lam : singular) {
    auto bundle = bell3_model(lam, 1000.0);
    const CriterionReport crit = criterion(bundle);
    const GammaChReport rep = gamma_ch(bundle.model, decompose(bundle, crit), crit);
    c.require(rep.divergent, "no divergence at lambda " + num(lam));
    const double f =
        reduced_fidelity(ness(bundle.model).rho, bundle.target_state, bundle.model.layout);
    dips += (dips.empty() ? "" : " ") + num(f);
    c.require(f <= 0.95, "fidelity " + num(f) + " at singular lambda " + num(lam) + " > 0.95");
  }
  c.note("singular-point fidelities " + dips);
  return c.out;
}

// 6. K-matrix singularity of the epsilon-parameterized Bell model.
Outcome criterion_6() {
  Check c;
  {
    auto bundle = bell3_epsilon_model(0.0);
    const SingularityScan scan = singularity_scan(decompose(bundle, criterion(bundle)));
    c.require(std::abs(scan.det_K) <= 1e-12, "det K at eps=0 is " + num(scan.det_K));
    c.note("det K(0) " + num(scan.det_K));
  }
  double dip = 1.0, neighbors = 1.0;
  for (int i = 0; i < 11; ++i) {
    const double eps = -1.0 + 0.2 * i;
    auto bundle = bell3_epsilon_model(eps, 1000.0);
    const CriterionReport crit = criterion(bundle);
    const GammaChReport rep = gamma_ch(bundle.model, decompose(bundle, crit), crit);
    c.require(rep.divergent == (eps == 0.0), "divergent flag at eps " + num(eps));
    const double f =
        reduced_fidelity(ness(bundle.model).rho, bundle.target_state, bundle.model.layout);
    if (eps == 0.0)
      dip = f;
    else if (std::abs(eps) >= 0.4)
      neighbors = std::min(neighbors, f);
  }
  c.require(dip < neighbors, "fidelity " + num(dip) + " at eps=0 does not dip below " +
                                 num(neighbors));
  c.note("dip " + num(dip) + " vs neighbors >= " + num(neighbors));
  return c.out;
}

// 7. Helix criterion constants and large-gamma fidelity.
Outcome criterion_7() {
  Check c;
  for (int n : {4, 5})
    for (double theta : {M_PI / 2, M_PI / 3})
      for (double gt : {M_PI / 4, 0.3}) {
        auto bundle = helix_model({n, theta, gt});
        const CriterionReport crit = criterion(bundle);
        const std::string tag =
            " (n=" + std::to_string(n) + ", theta=" + num(theta) + ", gt=" + num(gt) + ")";
        c.require(crit.satisfied, "criterion unsatisfied" + tag);
        c.require(std::abs(crit.lambda) <= 1e-9 * crit.h_norm,
                  "lambda " + num(crit.lambda) + tag);
        const double expect = std::sqrt(2.0) * std::sin(theta) * std::sin(gt);
        c.require(std::abs(std::abs(crit.kappa) - expect) <= 1e-9,
                  "|kappa| " + num(std::abs(crit.kappa)) + " vs " + num(expect) + tag);
      }
  auto bundle = helix_model({5, M_PI / 2, 0.3}, 200.0);
  const NessResult nr = ness(bundle.model);
  const double f = fidelity(nr.rho, full_target_state(bundle));
  c.require(nr.unique, "n=5 NESS not unique");
  c.require(f >= 0.99, "full-chain fidelity " + num(f) + " < 0.99");
  c.note("full-chain fidelity at n=5, gamma=200: " + num(f));
  return c.out;
}

// 8. Breakdown of helix convergence at the rational twist gamma = pi/2
// (m = 2): the two-site chain (below the N = m+1 = 3 threshold) converges,
// every admissible chain with N >= 3 visibly fails.
Outcome criterion_8() {
  Check c;
  const double theta = M_PI / 2, gt = M_PI / 2;
  {
    // two-site chain assembled directly: one traceless bond, both ends pinned
    LindbladModel m;
    m.layout = HilbertLayout::qubits(2, {0, 1});
    const double delta = std::cos(gt);
    m.hamiltonian =
        embed(pauli_x(), 0, m.layout) * embed(pauli_x(), 1, m.layout) +
        embed(pauli_y(), 0, m.layout) * embed(pauli_y(), 1, m.layout) +
        delta * (embed(pauli_z(), 0, m.layout) * embed(pauli_z(), 1, m.layout) - identity(4));
    m.jumps = {embed(local_polarizer(theta, 0.0), 0, m.layout),
               embed(local_polarizer(theta, gt), 1, m.layout)};
    m.gamma = 1000.0;
    const NessResult nr = ness(m);
    const PureState helix2 = kron(spinor(theta, 0.0), spinor(theta, gt));
    const double f = fidelity(nr.rho, helix2);
    c.require(nr.unique && f >= 0.99, "below-threshold chain N=2: fidelity " + num(f));
    c.note("N=2 fidelity " + num(f));
  }
  for (int n : {3, 4, 5}) {
    auto bundle = helix_model({n, theta, gt}, 1000.0);
    const NessResult nr = ness(bundle.model);
    const double f = fidelity(nr.rho, full_target_state(bundle));
    const bool fails_to_converge = !nr.unique || f < 0.95;
    c.require(fails_to_converge, "chain N=" + std::to_string(n) +
                                     " unexpectedly converged (fidelity " + num(f) + ")");
    c.note("N=" + std::to_string(n) + ": fidelity " + num(f) + ", nullity " +
           std::to_string(nr.nullity));
  }
  return c.out;
}

// 9. Property suites.
Outcome criterion_9() {
  Check c;
  const auto zoo = zeno::testing::nonsingular_zoo();
  std::string msg = zeno::testing::check_dissipator_roundtrip(100, 1e-10);
  c.require(msg.empty(), msg);
  msg = zeno::testing::check_kernel_dimension();
  c.require(msg.empty(), msg);
  msg = zeno::testing::check_trace_hermiticity(zoo, 1e-12);
  c.require(msg.empty(), msg);
  msg = zeno::testing::check_secular_conditions(zoo, 1e-8);
  c.require(msg.empty(), msg);
  msg = zeno::testing::check_k_matrix(zoo, 1e-9);
  c.require(msg.empty(), msg);
  msg = zeno::testing::check_noncommutativity_witness(zoo, 1e-9);
  c.require(msg.empty(), msg);
  c.note("round-trip, kernel, trace/Hermiticity, secular, K identities, witness");
  return c.out;
}

// 10. The truncated expansion misses the steady state by O(gamma^-3).
Outcome criterion_10() {
  Check c;
  auto bundle = minimal_model(MinimalModelParams::fig4(1));
  const CriterionReport crit = criterion(bundle);
  const ExpansionTerms terms = expansion_terms(bundle.model, decompose(bundle, crit), crit);
  auto residual = [&](double g) {
    LindbladModel model = bundle.model;
    model.gamma = g;
    return (ness(model).rho - (terms.rho0 + terms.rho1 / g + terms.rho2 / (g * g))).norm();
  };
  const double ratio = residual(1e3) / residual(3e3);
  c.require(std::abs(ratio - 27.0) <= 0.2 * 27.0, "ratio " + num(ratio));
  c.note("tail shrink ratio " + num(ratio) + " (expect 27 +- 20%)");
  return c.out;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria = {
    {"minimal-model closed form vs numeric NESS", criterion_1},
    {"Gamma_ch triple route agreement", criterion_2},
    {"fidelity closed form at gamma=10", criterion_3},
    {"power laws of 1-F and the gap", criterion_4},
    {"Bell model singular structure", criterion_5},
    {"K-matrix singularity at eps=0", criterion_6},
    {"helix criterion constants and fidelity", criterion_7},
    {"rational-twist breakdown threshold", criterion_8},
    {"property suites", criterion_9},
    {"expansion tail is O(gamma^-3)", criterion_10},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (std::size_t i = 1; i <= kCriteria.size(); ++i) selected.push_back(static_cast<int>(i));

  bool all_pass = true;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto& [name, fn] = kCriteria[id - 1];
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s%s%s\n", out.pass ? "PASS" : "FAIL", id, name.c_str(),
                out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}
