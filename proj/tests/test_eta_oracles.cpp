// Oracle triangle for eta: closed form, Fourier quadrature, and real-space
// Monte Carlo must agree within their stated tolerances.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "csl/constants.hpp"
#include "csl/formfactor.hpp"

using namespace csl;

TEST_CASE("Fourier quadrature matches the closed form across r_C") {
  const auto g = default_geometry();
  for (double rc : {1e-9, 3e-8, 1e-7, 1e-6, 3e-5, 1e-3, 1e-2}) {
    const CollapseParams p{1.0, rc};
    const auto closed = eta_closed_form(p, g);
    const auto quad = eta_fourier_quadrature(p, g);
    INFO("r_C = " << rc);
    CHECK_THAT(quad.eta_over_lambda,
               Catch::Matchers::WithinRel(closed.eta_over_lambda, 1e-4));
    CHECK(quad.error_estimate <= 1e-5 * quad.eta);
  }
}

TEST_CASE("Fourier quadrature vanishes at lambda = 0") {
  const auto g = default_geometry();
  CHECK(eta_fourier_quadrature({0.0, 1e-7}, g).eta == 0.0);
}

TEST_CASE("point-mass limit of the Fourier integral") {
  // shrinking the cylinder by 1e-3 with N fixed approaches the analytic
  // point-distribution value lambda N^2 / (4 r_C^2)
  auto g = default_geometry();
  g.radius *= 1e-3;
  g.thickness *= 1e-3;
  g.atom_density = g.atoms / (g.diamonds_count * std::numbers::pi * g.radius *
                              g.radius * g.thickness);
  const double rc = 1e-3;  // much larger than the shrunken cylinder
  const auto quad = eta_fourier_quadrature({1.0, rc}, g);
  const double point_limit = g.atoms * g.atoms / (4.0 * rc * rc);
  CHECK_THAT(quad.eta_over_lambda, Catch::Matchers::WithinRel(point_limit, 0.01));
}

TEST_CASE("Monte Carlo agrees with quadrature on a reduced cylinder") {
  // desk-scale geometry with R = d = r_C keeps the Gaussian kernel well
  // sampled by uniform pairs
  const double rc = 1e-3;
  const CollapseParams p{1.0, rc};
  auto g = default_geometry();
  g.radius = rc;
  g.thickness = rc;
  g.atoms = PhononGeometry::derived_atoms(g.atom_density, g.diamonds_count,
                                          g.radius, g.thickness);
  const CylinderDensity density{g.atoms * constants.m0, rc, rc};

  const auto mc = eta_realspace_mc(p, density, 1'000'000, 42);
  const auto quad = eta_fourier_quadrature(p, g);
  CHECK(mc.error_estimate > 0.0);
  CHECK(std::abs(mc.eta - quad.eta) <= 3.0 * mc.error_estimate);
  // the estimate itself should be tight at 1e6 samples
  CHECK(mc.error_estimate < 0.01 * quad.eta);
}

TEST_CASE("Monte Carlo determinism and lambda scaling") {
  const CylinderDensity density{1e-20, 1e-3, 1e-3};
  const CollapseParams p{2.0, 1e-3};
  const auto a = eta_realspace_mc(p, density, 20'000, 123);
  const auto b = eta_realspace_mc(p, density, 20'000, 123);
  CHECK(a.eta == b.eta);  // bit-identical for a fixed seed
  CHECK(a.error_estimate == b.error_estimate);
  const auto c = eta_realspace_mc({0.0, 1e-3}, density, 20'000, 123);
  CHECK(c.eta == 0.0);
  const auto d = eta_realspace_mc(p, density, 20'000, 124);
  CHECK(d.eta != a.eta);  // different stream
  CHECK_THROWS_AS(eta_realspace_mc(p, density, 100, 1), std::invalid_argument);
}

TEST_CASE("eta scaling regimes of the closed form") {
  const auto g = default_geometry();
  auto slope = [&](double rc) {
    const double h = 1.01;
    const double lo = eta_closed_form({1.0, rc / h}, g).eta_over_lambda;
    const double hi = eta_closed_form({1.0, rc * h}, g).eta_over_lambda;
    return std::log(hi / lo) / (2.0 * std::log(h));
  };
  CHECK_THAT(slope(1e-9), Catch::Matchers::WithinAbs(2.0, 0.1));   // eta ~ rc^2
  CHECK_THAT(slope(1e-5), Catch::Matchers::WithinAbs(0.0, 0.2));   // plateau
  CHECK_THAT(slope(1e-2), Catch::Matchers::WithinAbs(-2.0, 0.1));  // eta ~ rc^-2
}
