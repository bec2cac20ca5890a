// Scan of the (lambda, r_C) plane: decoherence exponent per grid point,
// excluded region, closed-form boundary lambda*(r_C) and its log-log slope
// regimes.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "csl/constants.hpp"
#include "csl/dynamics.hpp"
#include "csl/formfactor.hpp"

namespace csl {

struct GridSpec {
  double lambda_min = 1e-20, lambda_max = 1e2;  // s^-1
  double rc_min = 1e-9, rc_max = 1e-1;          // m
  std::size_t lambda_points = 200;
  std::size_t rc_points = 200;

  void validate() const {
    if (!(lambda_min > 0.0) || !(lambda_max > lambda_min) ||
        !(rc_min > 0.0) || !(rc_max > rc_min))
      throw std::invalid_argument("GridSpec: axes must be positive and increasing");
    if (lambda_points < 2 || rc_points < 2)
      throw std::invalid_argument("GridSpec: axes need at least two points");
    if (lambda_min < 1e-20 || lambda_max > 1e2 || rc_min < 1e-9 || rc_max > 1e-1)
      throw std::invalid_argument(
          "GridSpec: axes outside [1e-20, 1e2] s^-1 x [1e-9, 1e-1] m");
  }
};

inline std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  const double l0 = std::log10(lo), l1 = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) /
                              static_cast<double>(n - 1));
  return v;
}

struct ExclusionGrid {
  std::vector<double> lambda_axis;       // s^-1, log spaced
  std::vector<double> rc_axis;           // m, log spaced
  std::vector<double> exponent;          // row-major [i_lambda][j_rc]
  std::vector<char> excluded;            // exponent >= threshold
  double threshold;

  double at(std::size_t i, std::size_t j) const {
    return exponent[i * rc_axis.size() + j];
  }
  bool is_excluded(std::size_t i, std::size_t j) const {
    return excluded[i * rc_axis.size() + j] != 0;
  }
};

struct BoundaryCurve {
  std::vector<double> rc;           // m
  std::vector<double> lambda_star;  // s^-1 solving exponent = threshold
};

// exponent(i, j) = 4 eta(lambda_i, rc_j) delta_z^2 T with the closed-form
// eta. eta/lambda is evaluated once per rc column.
inline ExclusionGrid scan(const GridSpec& spec, const PhononGeometry& g,
                          double threshold,
                          MassConvention conv = MassConvention::nucleon_count) {
  spec.validate();
  g.validate();
  if (!(threshold > 0.0))
    throw std::invalid_argument("scan: threshold must be > 0");

  ExclusionGrid grid;
  grid.threshold = threshold;
  grid.lambda_axis = log_spaced(spec.lambda_min, spec.lambda_max, spec.lambda_points);
  grid.rc_axis = log_spaced(spec.rc_min, spec.rc_max, spec.rc_points);
  grid.exponent.resize(spec.lambda_points * spec.rc_points);
  grid.excluded.resize(grid.exponent.size());

  std::vector<double> geometry_factor(spec.rc_points);  // 4 (eta/lambda) dz^2 T
  for (std::size_t j = 0; j < spec.rc_points; ++j) {
    const auto eta = eta_closed_form({1.0, grid.rc_axis[j]}, g, conv);
    geometry_factor[j] = decoherence_exponent(eta.eta_over_lambda, g);
  }
  for (std::size_t i = 0; i < spec.lambda_points; ++i)
    for (std::size_t j = 0; j < spec.rc_points; ++j) {
      const double e = grid.lambda_axis[i] * geometry_factor[j];
      grid.exponent[i * spec.rc_points + j] = e;
      grid.excluded[i * spec.rc_points + j] = (e >= threshold) ? 1 : 0;
    }
  return grid;
}

// Exact inversion of the linear-in-lambda exponent:
//   lambda*(r_C) = threshold / (4 (eta/lambda)(r_C) delta_z^2 T).
inline BoundaryCurve boundary(const PhononGeometry& g,
                              const std::vector<double>& rc_axis, double threshold,
                              MassConvention conv = MassConvention::nucleon_count) {
  g.validate();
  if (!(threshold > 0.0))
    throw std::invalid_argument("boundary: threshold must be > 0");
  BoundaryCurve curve;
  curve.rc = rc_axis;
  curve.lambda_star.reserve(rc_axis.size());
  for (double rc : rc_axis) {
    const auto eta = eta_closed_form({1.0, rc}, g, conv);
    curve.lambda_star.push_back(threshold /
                                decoherence_exponent(eta.eta_over_lambda, g));
  }
  return curve;
}

// Centered finite difference of log lambda* vs log r_C at the grid point
// nearest rc. One grid cell of spacing; the boundary is smooth in log-log.
inline double local_slope(const BoundaryCurve& curve, double rc) {
  if (curve.rc.size() < 3)
    throw std::invalid_argument("local_slope: curve needs at least 3 points");
  if (rc < curve.rc.front() || rc > curve.rc.back())
    throw std::invalid_argument("local_slope: rc outside the curve range");
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < curve.rc.size(); ++i) {
    const double dist = std::abs(std::log(curve.rc[i]) - std::log(rc));
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  const std::size_t i = std::clamp<std::size_t>(best, 1, curve.rc.size() - 2);
  return (std::log(curve.lambda_star[i + 1]) - std::log(curve.lambda_star[i - 1])) /
         (std::log(curve.rc[i + 1]) - std::log(curve.rc[i - 1]));
}

}  // namespace csl
