#include <catch_amalgamated.hpp>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "floqopt/bessel.hpp"

using namespace floqopt;

namespace {

// Ascending series summed to 50 terms in extended precision.
long double series50(int k, long double x) {
  long double term = 1.0L;
  for (int i = 1; i <= k; ++i) term *= x / (2.0L * i);
  long double sum = term;
  const long double q = -x * x / 4.0L;
  for (int m = 1; m < 50; ++m) {
    term *= q / (static_cast<long double>(m) * (m + k));
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("bessel values at zero") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  for (int k = 1; k <= 64; ++k) CHECK(bessel_j(k, 0.0) == 0.0);
}

TEST_CASE("bessel matches the extended series for small arguments") {
  double worst = 0.0;
  for (int k = 0; k <= 20; ++k) {
    for (double x = 0.05; x <= 8.0; x += 0.37) {
      worst = std::max(worst, std::abs(bessel_j(k, x) - static_cast<double>(series50(k, x))));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("bessel matches boost and the standard library across the supported range") {
  double worst = 0.0;
  for (int k = 0; k <= 64; k += 3) {
    for (double x = 0.0; x <= 100.0; x += 0.731) {
      const double ref = boost::math::cyl_bessel_j(k, x);
      worst = std::max(worst, std::abs(bessel_j(k, x) - ref));
      CHECK(std::abs(std::cyl_bessel_j(static_cast<double>(k), x) - ref) <= 1e-10);
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("first zero of J0 by bisection") {
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j(0, lo) * bessel_j(0, mid) <= 0.0 ? hi : lo) = mid;
  }
  const double zero = 0.5 * (lo + hi);
  CHECK(std::abs(zero - 2.404825557695773) <= 1e-12);
  CHECK(std::abs(static_cast<double>(series50(0, zero))) <= 1e-12);
}

TEST_CASE("bessel range checks and signed orders") {
  CHECK_THROWS_AS(bessel_j(65, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_j(1, 100.5), std::domain_error);
  CHECK_THROWS_AS(bessel_j(-1, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_j(1, -1.0), std::domain_error);
  CHECK(bessel_j_signed(-3, 2.0) == -bessel_j(3, 2.0));
  CHECK(bessel_j_signed(3, -2.0) == -bessel_j(3, 2.0));
  CHECK(bessel_j_signed(2, -2.0) == bessel_j(2, 2.0));
}
