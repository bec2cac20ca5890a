// Cross-validation suite: every oracle-equivalence and invariant check,
// runnable from the CLI. Each check reports its name, tolerance and
// measured error. The gamma_perp_scale hook deliberately perturbs the
// closed-form eta so the sensitivity of the oracle triangle can be
// demonstrated.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "csl/constants.hpp"
#include "csl/dynamics.hpp"
#include "csl/exclusion.hpp"
#include "csl/formfactor.hpp"
#include "csl/photonics.hpp"
#include "csl/quadrature.hpp"
#include "csl/special.hpp"

namespace csl {

struct Check {
  std::string name;
  double tolerance;
  double measured;
  bool pass;
};

// Direct 3D tensor-product Gauss-Legendre quadrature of the defining
// integral
//   I_33 = (1/r_C^4) int d^3x e^{-[(x-r1)^2 + (x-r2)^2]/2 r_C^2}
//          (x - r1)_3 (x - r2)_3
// over a box of +-8 r_C around the midpoint (the weight there is < e^-64).
inline double i33_quadrature(const std::array<double, 3>& r1,
                             const std::array<double, 3>& r2, double r_c,
                             int order = 80) {
  static thread_local int cached_order = 0;
  static thread_local std::unique_ptr<GaussLegendre> rule;
  if (!rule || cached_order != order) {
    rule = std::make_unique<GaussLegendre>(order);
    cached_order = order;
  }
  const double half = 8.0 * r_c;
  std::array<double, 3> c{0.5 * (r1[0] + r2[0]), 0.5 * (r1[1] + r2[1]),
                          0.5 * (r1[2] + r2[2])};
  double sum = 0.0;
  const int n = order;
  for (int i = 0; i < n; ++i) {
    const double x = c[0] + half * rule->nodes[i];
    const double wx = rule->weights[i];
    for (int j = 0; j < n; ++j) {
      const double y = c[1] + half * rule->nodes[j];
      const double wy = rule->weights[j];
      for (int k = 0; k < n; ++k) {
        const double z = c[2] + half * rule->nodes[k];
        const double wz = rule->weights[k];
        const double d1 = (x - r1[0]) * (x - r1[0]) + (y - r1[1]) * (y - r1[1]) +
                          (z - r1[2]) * (z - r1[2]);
        const double d2 = (x - r2[0]) * (x - r2[0]) + (y - r2[1]) * (y - r2[1]) +
                          (z - r2[2]) * (z - r2[2]);
        sum += wx * wy * wz * std::exp(-(d1 + d2) / (2.0 * r_c * r_c)) *
               (z - r1[2]) * (z - r2[2]);
      }
    }
  }
  const double jac = half * half * half;  // (8 r_C)^3 / 2^3 per dimension
  return sum * jac / std::pow(r_c, 4);
}

namespace detail {

inline Check relative_check(std::string name, double measured, double tol) {
  return {std::move(name), tol, measured, measured <= tol};
}

}  // namespace detail

struct ValidationHooks {
  double gamma_perp_scale = 1.0;  // test hook: scales the closed-form eta
};

inline std::vector<Check> run_validation(const PhononGeometry& g,
                                         std::uint64_t seed,
                                         const ValidationHooks& hooks = {}) {
  std::vector<Check> checks;

  // Special functions against frozen high-precision references.
  {
    const struct { double x, ref; } j1_refs[] = {
        {1.0, 0.44005058574493351596},
        {1.8411837813406593, 0.58186522428159637933},
        {10.0, 0.04347274616886143667},
        {50.0, -0.097511828125175137661},
    };
    double worst = 0.0;
    for (const auto& r : j1_refs)
      worst = std::max(worst, std::abs(bessel_j1(r.x) - r.ref) / std::abs(r.ref));
    checks.push_back(detail::relative_check("bessel_j1 vs reference", worst, 1e-10));
  }
  {
    const double x = std::sqrt(50.0);  // series/asymptotic switchover of Gamma_perp
    const double below = gamma_perp(x * (1.0 - 1e-9));
    const double above = gamma_perp(x * (1.0 + 1e-9));
    checks.push_back(detail::relative_check("gamma_perp switchover continuity",
                                            std::abs(below - above), 1e-9));
  }

  // Oracle triangle: closed form vs Fourier quadrature.
  {
    double worst = 0.0;
    for (double rc : {1e-8, 1e-7, 1e-6, 1e-4, 1e-2}) {
      const CollapseParams p{1.0, rc};
      const double closed =
          eta_closed_form(p, g).eta_over_lambda * hooks.gamma_perp_scale;
      const double quad = eta_fourier_quadrature(p, g).eta_over_lambda;
      worst = std::max(worst, std::abs(closed - quad) / quad);
    }
    checks.push_back(
        detail::relative_check("eta closed form vs Fourier quadrature", worst, 1e-4));
  }

  // Oracle triangle: Monte Carlo on a reduced (desk-scale) cylinder.
  {
    const double rc = 1e-3;
    const CollapseParams p{1.0, rc};
    PhononGeometry reduced = g;
    reduced.radius = rc;
    reduced.thickness = rc;
    reduced.atoms = PhononGeometry::derived_atoms(
        reduced.atom_density, reduced.diamonds_count, reduced.radius, reduced.thickness);
    const CylinderDensity density{reduced.atoms * constants.m0, rc, rc};
    const auto mc = eta_realspace_mc(p, density, 300'000, seed);
    const auto quad = eta_fourier_quadrature(p, reduced);
    const double sigmas = std::abs(mc.eta - quad.eta) / mc.error_estimate;
    checks.push_back(detail::relative_check(
        "eta Monte Carlo vs quadrature (std errors)", sigmas, 3.0));
  }

  // I_33 closed form vs direct 3D quadrature.
  {
    const double rc = 1.0;
    const std::array<std::array<double, 3>, 3> offsets = {
        {{0.5 * rc, 0.5 * rc, 0.5 * rc}, {0.0, 0.0, 1.2 * rc}, {2.0 * rc, -0.3 * rc, 0.7 * rc}}};
    double worst = 0.0;
    for (const auto& y : offsets) {
      const std::array<double, 3> r1{0.3, -0.1, 0.2};
      const std::array<double, 3> r2{r1[0] - y[0], r1[1] - y[1], r1[2] - y[2]};
      const double analytic = i33_analytic(r1, r2, rc);
      const double quad = i33_quadrature(r1, r2, rc);
      // normalized by the coincident-point value (pi^{3/2}/2) r_C
      worst = std::max(worst, std::abs(analytic - quad) /
                                  (0.5 * std::pow(std::numbers::pi, 1.5) * rc));
    }
    checks.push_back(detail::relative_check("i33 analytic vs 3D quadrature", worst, 1e-8));
  }

  // Dynamics: closed-form solution vs adaptive integrator.
  {
    double worst = 0.0;
    const double pairs[][2] = {{1.0, 0.2}, {0.5, 1.0}, {2.0, 1.0}};  // (Lambda, omega)
    for (const auto& pr : pairs) {
      const EvolutionParams p(pr[1], pr[0]);
      const auto rho0 = bell_initial_state();
      for (double t : {0.3, 1.0, 3.0}) {
        const auto a = evolve_analytic(p, t);
        const auto n = evolve_numeric(rho0, p, t);
        worst = std::max(worst, (a - n).cwiseAbs().maxCoeff());
      }
    }
    checks.push_back(detail::relative_check("dynamics analytic vs numeric", worst, 1e-8));
  }
  {
    const auto fixed = stationary_state();
    const double residual =
        std::max(commutator_h(fixed).cwiseAbs().maxCoeff(),
                 gamma_dissipator(fixed).cwiseAbs().maxCoeff());
    checks.push_back(detail::relative_check("stationary state fixed point", residual, 1e-15));
  }

  // Fringes: closed form vs full pipeline.
  {
    const double eps = 0.05;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double phi_a = 2.0 * std::numbers::pi * i / 20.0;
      const FringeConfig cfg{eps, eps, 0.7, phi_a};
      const auto closed = fringe_probabilities(cfg);
      const auto pipeline = fringe_from_pipeline(cfg);
      const double scale = 2.0 * eps * eps;
      worst = std::max({worst, std::abs(closed.first - pipeline.first) / scale,
                        std::abs(closed.second - pipeline.second) / scale});
    }
    checks.push_back(detail::relative_check("fringe closed form vs pipeline", worst,
                                            5.0 * (eps * eps + eps * eps)));
  }

  // Exclusion boundary slope regimes.
  {
    const auto curve = boundary(g, log_spaced(1e-9, 1e-1, 200), 1.0);
    const double s1 = local_slope(curve, 1e-9);
    const double s2 = local_slope(curve, 1e-5);
    const double s3 = local_slope(curve, 1e-2);
    checks.push_back(detail::relative_check("boundary slope at r_C=1e-9 (target -2)",
                                            std::abs(s1 + 2.0), 0.1));
    checks.push_back(detail::relative_check("boundary slope at r_C=1e-5 (target 0)",
                                            std::abs(s2), 0.2));
    checks.push_back(detail::relative_check("boundary slope at r_C=1e-2 (target +2)",
                                            std::abs(s3 - 2.0), 0.1));
  }

  return checks;
}

}  // namespace csl
