// Special functions needed by the form-factor module: J1, I0, I1 (plain and
// exponentially scaled), sinc, and the transverse geometry function
// Gamma_perp built from them.
//
// J1 uses a long-double power series up to |x| = 18 and the Hankel
// asymptotic expansion beyond; the switchover is where both paths agree to
// better than 1e-11. I0/I1 use the (cancellation-free) power series up to
// x = 100 and the scaled asymptotic series beyond.
#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace csl {

inline constexpr double kBesselJSeriesCut = 18.0;
inline constexpr double kBesselISeriesCut = 100.0;

// sinc(y) = sin(y)/y, unnormalized.
inline double sinc(double y) {
  if (std::abs(y) < 1e-4) {
    const double y2 = y * y;
    return 1.0 - y2 / 6.0 * (1.0 - y2 / 20.0);
  }
  return std::sin(y) / y;
}

namespace detail {

// J1 Taylor series, accumulated in long double: the alternating sum loses
// ~4 digits at x = 18, which the extended mantissa absorbs.
inline double j1_series(double x) {
  const long double half = 0.5L * static_cast<long double>(x);
  const long double q = half * half;
  long double term = half;  // k = 0 term: (x/2) / (0! 1!)
  long double sum = term;
  for (int k = 1; k < 80; ++k) {
    term *= -q / (static_cast<long double>(k) * (k + 1));
    sum += term;
    if (std::abs(static_cast<double>(term)) <
        1e-19 * std::abs(static_cast<double>(sum)) + 1e-300)
      break;
  }
  return static_cast<double>(sum);
}

// Hankel expansion J1(x) ~ sqrt(2/(pi x)) [cos(chi) P - sin(chi) Q],
// chi = x - 3 pi/4, summed to its smallest term.
inline double j1_asymptotic(double x) {
  const double mu = 4.0;  // 4 nu^2 for nu = 1
  const double z = 8.0 * x;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k < 40; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * z);
    if (std::abs(term) >= prev) break;  // divergence onset
    prev = std::abs(term);
    if (k % 2 == 1) {
      q += (k % 4 == 1) ? term : -term;
    } else {
      p += (k % 4 == 2) ? -term : term;
    }
    if (std::abs(term) < 1e-17) break;
  }
  const double chi = x - 0.75 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) *
         (std::cos(chi) * p - std::sin(chi) * q);
}

// Power series for I_nu, nu in {0,1}; all terms positive.
inline long double bessel_i_series(int order, double x) {
  const long double half = 0.5L * static_cast<long double>(x);
  const long double q = half * half;
  long double term = (order == 0) ? 1.0L : half;
  long double sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<long double>(k) * (k + order));
    sum += term;
    if (term < 1e-20L * sum) break;
  }
  return sum;
}

// e^{-x} I_nu(x) for large x: asymptotic series summed to its smallest term.
inline double bessel_ie_asymptotic(int order, double x) {
  const double mu = 4.0 * order * order;
  const double z = 8.0 * x;
  double sum = 1.0;
  double term = 1.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k < 40; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (k * z);
    if (std::abs(term) >= prev) break;
    prev = std::abs(term);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace detail

// Bessel function of the first kind, order 1.
inline double bessel_j1(double x) {
  if (!std::isfinite(x))
    throw std::invalid_argument("bessel_j1: non-finite argument");
  const double ax = std::abs(x);
  const double v = (ax <= kBesselJSeriesCut) ? detail::j1_series(ax)
                                             : detail::j1_asymptotic(ax);
  return x < 0 ? -v : v;  // J1 is odd
}

// Exponentially scaled modified Bessel function e^{-x} I_order(x), x >= 0.
inline double bessel_ie(int order, double x) {
  if (order != 0 && order != 1)
    throw std::invalid_argument("bessel_ie: order must be 0 or 1");
  if (!(x >= 0.0) || !std::isfinite(x))
    throw std::invalid_argument("bessel_ie: argument must be >= 0 and finite");
  if (x <= kBesselISeriesCut) {
    const long double s = detail::bessel_i_series(order, x);
    return static_cast<double>(std::exp(-static_cast<long double>(x)) * s);
  }
  return detail::bessel_ie_asymptotic(order, x);
}

// Modified Bessel function of the first kind, order 0 or 1. Overflows for
// x beyond ~700; use bessel_ie for large arguments.
inline double bessel_i(int order, double x) {
  if (order != 0 && order != 1)
    throw std::invalid_argument("bessel_i: order must be 0 or 1");
  if (!(x >= 0.0) || !std::isfinite(x))
    throw std::invalid_argument("bessel_i: argument must be >= 0 and finite");
  if (x <= kBesselISeriesCut)
    return static_cast<double>(detail::bessel_i_series(order, x));
  return detail::bessel_ie_asymptotic(order, x) * std::exp(x);
}

// Transverse geometry function
//   Gamma_perp(x) = (2/x^2) [1 - e^{-x^2} (I0(x^2) + I1(x^2))],
// monotonically decreasing from 1 at x -> 0+. The scaled Bessel form keeps
// the evaluation overflow-free for x^2 > 50.
inline double gamma_perp(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::invalid_argument("gamma_perp: argument must be > 0 and finite");
  const double u = x * x;
  if (x < 1e-4) return 1.0 - 0.5 * u;  // series limit, next term O(u^2)
  double scaled;  // e^{-u} (I0(u) + I1(u))
  if (u > 50.0) {
    scaled = detail::bessel_ie_asymptotic(0, u) + detail::bessel_ie_asymptotic(1, u);
  } else {
    scaled = static_cast<double>(
        std::exp(-static_cast<long double>(u)) *
        (detail::bessel_i_series(0, u) + detail::bessel_i_series(1, u)));
  }
  return (2.0 / u) * (1.0 - scaled);
}

}  // namespace csl
