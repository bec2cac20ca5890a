// Panelized adaptive Gauss-Kronrod (G7,K15) integration on a finite
// interval. The caller seeds an initial uniform subdivision (sized to the
// integrand's oscillation scale); panels whose error estimate exceeds their
// share of the budget are bisected until the global estimate meets the
// tolerance.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace csl {

struct QuadratureResult {
  double value;
  double error;  // absolute error estimate
  std::size_t evaluations;
  bool converged;
};

namespace detail {

// G7,K15 nodes/weights on [-1, 1] (Kronrod 1965).
inline constexpr double kKronrodNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,
    0.741531185599394,  0.864864423359769,  0.949107912342759,
    0.991455371120813};
inline constexpr double kKronrodWeights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529};
inline constexpr double kGaussWeights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct Panel {
  double a, b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double kronrod = 0.0, gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double fx = f(c + h * kKronrodNodes[i]);
    kronrod += kKronrodWeights[i] * fx;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fx;
  }
  kronrod *= h;
  gauss *= h;
  const double diff = std::abs(kronrod - gauss);
  // standard QUADPACK-style sharpened estimate
  const double err = diff * std::min(1.0, std::pow(200.0 * diff / (std::abs(kronrod) + 1e-300), 1.5));
  return {a, b, kronrod, std::max(err, diff * 1e-6)};
}

}  // namespace detail

// Integrate f over [a, b]. initial_panels seeds a uniform subdivision.
template <class F>
QuadratureResult integrate(const F& f, double a, double b, double rel_tol,
                           double abs_tol = 0.0,
                           std::size_t initial_panels = 16,
                           std::size_t max_panels = 2'000'000) {
  if (!(b > a)) throw std::invalid_argument("integrate: requires b > a");
  initial_panels = std::max<std::size_t>(initial_panels, 1);

  std::priority_queue<detail::Panel> heap;
  double value = 0.0, error = 0.0;
  std::size_t evals = 0, panels = initial_panels;
  const double w = (b - a) / static_cast<double>(initial_panels);
  for (std::size_t i = 0; i < initial_panels; ++i) {
    auto p = detail::gk15(f, a + i * w, (i + 1 == initial_panels) ? b : a + (i + 1) * w);
    evals += 15;
    value += p.value;
    error += p.error;
    heap.push(p);
  }

  auto tolerance = [&] { return std::max(abs_tol, rel_tol * std::abs(value)); };
  while (error > tolerance() && panels < max_panels) {
    const detail::Panel worst = heap.top();
    heap.pop();
    if (worst.b - worst.a < 1e-15 * (b - a)) {
      // interval exhausted; put it back and give up refining
      heap.push(worst);
      break;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    evals += 30;
    ++panels;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  return {value, error, evals, error <= tolerance()};
}

// Fixed-order Gauss-Legendre rule (nodes on [-1, 1]), computed once via
// Newton iteration on the Legendre polynomial. Used by tensor-product
// oracles over smooth Gaussian integrands.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    for (int i = 0; i < n; ++i) {
      // Chebyshev initial guess
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  template <class F>
  double on(double a, double b, const F& f) const {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      sum += weights[i] * f(c + h * nodes[i]);
    return h * sum;
  }
};

}  // namespace csl
