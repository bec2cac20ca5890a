#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "csl/special.hpp"

using namespace csl;

namespace {

// Independent oracle: J1 Taylor series in long double, summed far past the
// working precision. Accurate to ~1e-13 for |x| up to ~20; beyond that the
// alternating-sum cancellation eats into the extended mantissa.
long double j1_oracle(long double x) {
  const long double q = 0.25L * x * x;
  long double term = 0.5L * x;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<long double>(k) * (k + 1));
    sum += term;
  }
  return sum;
}

// I_nu power series oracle, all-positive terms.
long double i_oracle(int order, long double x) {
  const long double q = 0.25L * x * x;
  long double term = (order == 0) ? 1.0L : 0.5L * x;
  long double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<long double>(k) * (k + order));
    sum += term;
    if (term < 1e-25L * sum) break;
  }
  return sum;
}

}  // namespace

TEST_CASE("bessel_j1 reference values") {
  // frozen from a 40-digit evaluation
  CHECK(bessel_j1(0.0) == 0.0);
  CHECK_THAT(bessel_j1(0.25), Catch::Matchers::WithinRel(0.12402597732272692273, 1e-12));
  CHECK_THAT(bessel_j1(1.0), Catch::Matchers::WithinRel(0.44005058574493351596, 1e-12));
  CHECK_THAT(bessel_j1(1.8411837813406593),
             Catch::Matchers::WithinRel(0.58186522428159637933, 1e-12));
  CHECK_THAT(bessel_j1(10.0), Catch::Matchers::WithinRel(0.04347274616886143667, 1e-11));
  CHECK_THAT(bessel_j1(25.0), Catch::Matchers::WithinRel(-0.12535024958028990465, 1e-11));
  CHECK_THAT(bessel_j1(50.0), Catch::Matchers::WithinRel(-0.097511828125175137661, 1e-11));
  CHECK_THAT(bessel_j1(123.456), Catch::Matchers::WithinRel(-0.010839584856520648731, 1e-11));
  CHECK_THAT(bessel_j1(500.0), Catch::Matchers::WithinRel(0.010472613470372292844, 1e-11));
  // first positive zero
  CHECK(std::abs(bessel_j1(3.831705970207512)) < 1e-15);
}

TEST_CASE("bessel_j1 against series oracle on random arguments") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const double x = 20.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double ref = static_cast<double>(j1_oracle(x));
    // floor keeps the check meaningful near zeros without tripping over the
    // oracle's own cancellation noise
    CHECK(std::abs(bessel_j1(x) - ref) <= 1e-10 * std::max(5e-2, std::abs(ref)));
  }
}

TEST_CASE("bessel_j1 is odd and rejects non-finite input") {
  CHECK(bessel_j1(-2.5) == -bessel_j1(2.5));
  CHECK(bessel_j1(-40.0) == -bessel_j1(40.0));
  CHECK_THROWS_AS(bessel_j1(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(bessel_j1(INFINITY), std::invalid_argument);
}

TEST_CASE("bessel_j1 continuity at the series/asymptotic switchover") {
  const double x = kBesselJSeriesCut;
  CHECK(std::abs(bessel_j1(x * (1 - 1e-12)) - bessel_j1(x * (1 + 1e-12))) < 1e-11);
  // frozen values bracketing the switchover
  CHECK_THAT(bessel_j1(17.9), Catch::Matchers::WithinRel(-0.18676536891349662526, 1e-11));
  CHECK_THAT(bessel_j1(18.1), Catch::Matchers::WithinRel(-0.18735018270637614665, 1e-11));
}

TEST_CASE("modified Bessel functions") {
  CHECK(bessel_i(0, 0.0) == 1.0);
  CHECK(bessel_i(1, 0.0) == 0.0);
  CHECK_THAT(bessel_i(0, 1.0), Catch::Matchers::WithinRel(1.2660658777520083356, 1e-13));
  CHECK_THAT(bessel_i(1, 2.5), Catch::Matchers::WithinRel(2.5167162452886984415, 1e-13));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const double x = 60.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    for (int order : {0, 1}) {
      const double ref = static_cast<double>(
          std::exp(-static_cast<long double>(x)) * i_oracle(order, x));
      CHECK_THAT(bessel_ie(order, x), Catch::Matchers::WithinRel(ref, 1e-12));
    }
  }
  CHECK_THROWS_AS(bessel_i(0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(bessel_ie(1, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(bessel_i(2, 1.0), std::invalid_argument);
}

TEST_CASE("scaled Bessel sum stays bounded for huge arguments") {
  // frozen: e^{-x}(I0 + I1)
  CHECK_THAT(bessel_ie(0, 648.0) + bessel_ie(1, 648.0),
             Catch::Matchers::WithinRel(0.03133781773106351453, 1e-12));
  CHECK_THAT(bessel_ie(0, 1e4) + bessel_ie(1, 1e4),
             Catch::Matchers::WithinRel(0.0079787458705883943708, 1e-12));
  // both sides of the series/asymptotic switchover against frozen references
  const double x = kBesselISeriesCut;
  CHECK_THAT(bessel_ie(0, x * (1 - 1e-12)),
             Catch::Matchers::WithinRel(0.039944379299116705274, 1e-13));
  CHECK_THAT(bessel_ie(0, x * (1 + 1e-12)),
             Catch::Matchers::WithinRel(0.039944379299076660020, 1e-13));
  CHECK_THAT(bessel_ie(1, x * (1 - 1e-12)),
             Catch::Matchers::WithinRel(0.039744153025149974199, 1e-13));
  CHECK_THAT(bessel_ie(1, x * (1 + 1e-12)),
             Catch::Matchers::WithinRel(0.039744153025110531148, 1e-13));
}

TEST_CASE("gamma_perp values and limits") {
  // frozen 40-digit references
  CHECK_THAT(gamma_perp(0.01), Catch::Matchers::WithinRel(0.99995000208326046677, 1e-10));
  CHECK_THAT(gamma_perp(0.1), Catch::Matchers::WithinRel(0.99502076063484512818, 1e-12));
  CHECK_THAT(gamma_perp(1.0), Catch::Matchers::WithinRel(0.65265995411330222926, 1e-12));
  CHECK_THAT(gamma_perp(2.0), Catch::Matchers::WithinRel(0.30712361963678898755, 1e-12));
  CHECK_THAT(gamma_perp(25.455844), Catch::Matchers::WithinRel(0.0029896981217815998735, 1e-12));

  // x -> 0+ limit is 1
  CHECK_THAT(gamma_perp(1e-5), Catch::Matchers::WithinRel(1.0, 1e-9));
  // preset R/(sqrt(2) 1e-7): within 2% of the 2/x^2 asymptote
  const double x = 3.6e-6 / (std::sqrt(2.0) * 1e-7);
  CHECK_THAT(gamma_perp(x), Catch::Matchers::WithinRel(2.0 / (x * x), 0.04));
  CHECK(std::abs(gamma_perp(x) / (2.0 / (x * x)) - 1.0) < 0.04);
  CHECK_THROWS_AS(gamma_perp(0.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_perp(-1.0), std::invalid_argument);
}

TEST_CASE("gamma_perp is monotonically decreasing in (0, 1]") {
  double prev = 1.0;
  for (double x = 1e-3; x < 100.0; x *= 1.1) {
    const double v = gamma_perp(x);
    CHECK(v > 0.0);
    CHECK(v <= prev + 1e-15);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("gamma_perp continuity at the scaled-form switchover") {
  const double x = std::sqrt(50.0);
  CHECK(std::abs(gamma_perp(x * (1 - 1e-10)) - gamma_perp(x * (1 + 1e-10))) < 1e-9);
}

TEST_CASE("sinc convention") {
  CHECK(sinc(0.0) == 1.0);
  CHECK_THAT(sinc(std::numbers::pi), Catch::Matchers::WithinAbs(0.0, 1e-16));
  CHECK_THAT(sinc(1.0), Catch::Matchers::WithinRel(std::sin(1.0), 1e-15));
  CHECK_THAT(sinc(1e-6), Catch::Matchers::WithinRel(1.0 - 1e-12 / 6.0, 1e-15));
}
