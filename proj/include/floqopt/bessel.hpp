#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace floqopt {

inline constexpr int kBesselMaxOrder = 64;
inline constexpr double kBesselMaxArgument = 100.0;

namespace detail {

// Ascending power series; terms stay below ~5e3 for x <= 12, so the
// cancellation error is a few 1e-13 at worst.
inline double bessel_j_series(int k, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= k; ++i) term *= half / i;
  double sum = term;
  const double q = -half * half;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<double>(m) * static_cast<double>(m + k));
    sum += term;
    if (m > half && std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Miller's backward recurrence normalised by J_0 + 2 sum J_2m = 1.
inline double bessel_j_miller(int k, double x) {
  const int top = std::max(k, static_cast<int>(x));
  int start = top + 20 + static_cast<int>(std::sqrt(40.0 * top));
  start += start % 2;

  double next = 0.0;  // J_{n+1}
  double cur = 1e-30; // J_n
  double norm = 0.0;
  double wanted = 0.0;
  for (int n = start; n > 0; --n) {
    const double prev = (2.0 * n / x) * cur - next;
    next = cur;
    cur = prev;
    if (n - 1 == k) wanted = cur;
    if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * cur;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      wanted *= 1e-250;
    }
  }
  norm += cur;  // J_0
  return wanted / norm;
}

}  // namespace detail

/// Bessel function of the first kind J_k(x) for integer 0 <= k <= 64 and
/// 0 <= x <= 100. Absolute error stays below 1e-10 on that range.
inline double bessel_j(int k, double x) {
  if (k < 0 || k > kBesselMaxOrder || !(x >= 0.0) || x > kBesselMaxArgument) {
    throw std::domain_error("bessel_j: (k=" + std::to_string(k) + ", x=" + std::to_string(x) +
                            ") outside supported range 0<=k<=64, 0<=x<=100");
  }
  if (x == 0.0) return k == 0 ? 1.0 : 0.0;
  if (x <= 12.0) return detail::bessel_j_series(k, x);
  return detail::bessel_j_miller(k, x);
}

/// J_k(x) for any integer k, via J_{-k} = (-1)^k J_k, and for x < 0 via
/// J_k(-x) = (-1)^k J_k(x).
inline double bessel_j_signed(int k, double x) {
  double sign = 1.0;
  if (k < 0) {
    k = -k;
    if (k % 2) sign = -sign;
  }
  if (x < 0.0) {
    x = -x;
    if (k % 2) sign = -sign;
  }
  return sign * bessel_j(k, x);
}

}  // namespace floqopt
