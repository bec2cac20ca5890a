#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "csl/dynamics.hpp"

using namespace csl;
using Catch::Matchers::WithinAbs;

namespace {

double max_diff(const DensityMatrix4& a, const DensityMatrix4& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("commutator matrix structure") {
  // diagonal rho commutes
  CHECK(commutator_h(stationary_state()).cwiseAbs().maxCoeff() == 0.0);

  DensityMatrix4 rho = DensityMatrix4::Zero();
  rho(0, 3) = rho(3, 0) = 1.0;
  const auto c = commutator_h(rho);
  CHECK(c(0, 3) == Complex(-2.0, 0.0));
  CHECK(c(3, 0) == Complex(2.0, 0.0));
  CHECK(c.cwiseAbs().sum() == 4.0);  // nothing else populated

  DensityMatrix4 rho23 = DensityMatrix4::Zero();
  rho23(1, 2) = rho23(2, 1) = 1.0;
  CHECK(commutator_h(rho23).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("commutator output is anti-Hermitian") {
  DensityMatrix4 rho;
  rho << 0.4, Complex(0.1, 0.2), Complex(0.0, -0.1), Complex(0.05, 0.0),
      Complex(0.1, -0.2), 0.3, Complex(0.02, 0.01), 0.0,
      Complex(0.0, 0.1), Complex(0.02, -0.01), 0.2, Complex(0.0, 0.03),
      Complex(0.05, 0.0), 0.0, Complex(0.0, -0.03), 0.1;
  const auto c = commutator_h(rho);
  CHECK((c + c.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("dissipator on the stationary and Bell states") {
  CHECK(gamma_dissipator(stationary_state()).cwiseAbs().maxCoeff() == 0.0);

  const auto g = gamma_dissipator(bell_initial_state());
  // by direct substitution into the dissipator pattern
  CHECK(g(0, 0) == Complex(-1.0, 0.0));
  CHECK(g(1, 2) == Complex(1.0, 0.0));
  CHECK(g(3, 3) == Complex(-1.0, 0.0));
  CHECK(g(1, 1) == Complex(1.0, 0.0));
  CHECK(std::abs(g.trace()) < 1e-15);
}

TEST_CASE("dissipator preserves Hermiticity and is traceless") {
  DensityMatrix4 rho;
  rho << 0.4, Complex(0.1, 0.2), Complex(0.0, -0.1), Complex(0.05, 0.07),
      Complex(0.1, -0.2), 0.3, Complex(0.02, 0.01), Complex(0.01, 0.0),
      Complex(0.0, 0.1), Complex(0.02, -0.01), 0.2, Complex(0.0, 0.03),
      Complex(0.05, -0.07), Complex(0.01, 0.0), Complex(0.0, -0.03), 0.1;
  const auto g = gamma_dissipator(rho);
  CHECK((g - g.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(g.trace()) < 1e-15);
}

TEST_CASE("analytic solution at t = 0 is the Bell state") {
  const double pairs[][2] = {{1.0, 0.2}, {0.5, 3.0}, {2.0, 1.0}, {0.0, 1.0}};
  for (const auto& pr : pairs) {
    const EvolutionParams p(pr[1], pr[0]);
    CHECK(max_diff(evolve_analytic(p, 0.0), bell_initial_state()) < 1e-14);
  }
}

TEST_CASE("analytic solution approaches the stationary state") {
  const EvolutionParams p(0.7, 1.3);
  CHECK(max_diff(evolve_analytic(p, 50.0), stationary_state()) < 1e-12);
}

TEST_CASE("Lambda = 0 freezes the Bell state") {
  const EvolutionParams p(0.8, 0.0);
  for (double t : {0.0, 1.0, 7.3, 100.0}) {
    CHECK(max_diff(evolve_analytic(p, t), bell_initial_state()) < 1e-12);
    CHECK(max_diff(evolve_numeric(bell_initial_state(), p, t), bell_initial_state()) <
          1e-9);
  }
}

TEST_CASE("numeric evolution matches the closed-form solution") {
  const EvolutionParams p(0.2, 1.0);  // omega, Lambda
  const auto rho = evolve_numeric(bell_initial_state(), p, 3.0);
  CHECK(max_diff(rho, evolve_analytic(p, 3.0)) < 1e-8);
}

TEST_CASE("analytic/numeric agreement across both regimes") {
  // Lambda > 2 omega (real Omega) and Lambda < 2 omega (oscillatory)
  const double pairs[][2] = {{3.0, 0.5}, {1.0, 0.2}, {0.3, 1.0},
                             {1.0, 0.5000001}, {0.05, 2.0}};
  for (const auto& pr : pairs) {
    const EvolutionParams p(pr[1], pr[0]);
    const auto rho0 = bell_initial_state();
    for (double t : {0.1, 0.9, 2.5, 10.0 / pr[0]}) {
      const auto a = evolve_analytic(p, t);
      const auto n = evolve_numeric(rho0, p, t);
      INFO("Lambda = " << pr[0] << " omega = " << pr[1] << " t = " << t);
      CHECK(max_diff(a, n) < 1e-8);
      CHECK_NOTHROW(check_density_matrix(n));
    }
  }
}

TEST_CASE("Omega = 0 degenerate point (Lambda = 2 omega)") {
  const EvolutionParams p(0.5, 1.0);
  CHECK(std::abs(p.Omega) < 1e-12);
  for (double t : {0.5, 2.0}) {
    const auto a = evolve_analytic(p, t);
    const auto n = evolve_numeric(bell_initial_state(), p, t);
    CHECK(max_diff(a, n) < 1e-8);
  }
}

TEST_CASE("purity is non-increasing under pure decoherence") {
  const EvolutionParams p(0.0, 1.0);
  double prev = 1.0;
  for (double t = 0.0; t <= 5.0; t += 0.25) {
    const auto rho = evolve_analytic(p, t);
    const double purity = (rho * rho).trace().real();
    CHECK(purity <= prev + 1e-12);
    prev = purity;
  }
}

TEST_CASE("off-diagonal rho_23 decays faster for larger Lambda") {
  const double t = 1.0, w = 0.4;
  double prev = 1.0;
  for (double L : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double v = std::abs(evolve_analytic(EvolutionParams(w, L), t)(1, 2));
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

TEST_CASE("evolution params from eta") {
  const auto g = default_geometry();
  const EtaResult eta{6.2e27, 6.2e35, EtaMethod::closed_form};
  const auto p = EvolutionParams::from_eta(eta, g);
  CHECK_THAT(p.Lambda, Catch::Matchers::WithinRel(4.0 * 6.2e27 * 1.6e-11 * 1.6e-11, 1e-12));
  CHECK(p.omega == g.omega);
  // Lambda = 4 eta hbar/(omega m*) to within the delta_z rounding (3%)
  const double via_hbar = 4.0 * eta.eta * constants.hbar / (g.omega * g.m_star);
  CHECK_THAT(p.Lambda, Catch::Matchers::WithinRel(via_hbar, 0.07));
}

TEST_CASE("decoherence exponent") {
  const auto g = default_geometry();
  CHECK(decoherence_exponent(0.0, g) == 0.0);
  const auto eta = eta_closed_form({1e-8, 1e-7}, g);
  const double expnt = decoherence_exponent(eta.eta, g);
  CHECK(expnt > 2.3e-6 / 1.5);
  CHECK(expnt < 2.3e-6 * 1.5);
  // consistency with Lambda T
  const auto p = EvolutionParams::from_eta(eta, g);
  CHECK_THAT(expnt, Catch::Matchers::WithinRel(p.Lambda * g.probe_delay, 1e-12));
  CHECK_THROWS_AS(decoherence_exponent(-1.0, g), std::invalid_argument);
}

TEST_CASE("density matrix invariant checks") {
  CHECK_NOTHROW(check_density_matrix(bell_initial_state()));
  CHECK_NOTHROW(check_density_matrix(stationary_state()));
  DensityMatrix4 bad = bell_initial_state();
  bad(0, 0) = 0.5;  // trace 1.5
  CHECK_THROWS(check_density_matrix(bad));
  bad = bell_initial_state();
  bad(1, 2) = Complex(0.0, 0.9);  // not Hermitian
  CHECK_THROWS(check_density_matrix(bad));
}
