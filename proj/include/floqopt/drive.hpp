#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace floqopt {

/// Periodic drive g(t) = sum_n b_n sin(n t), in units where the drive
/// frequency is 1. Coefficient index 0 holds b_1.
class FourierDrive {
 public:
  FourierDrive() = default;
  explicit FourierDrive(std::vector<double> coefficients)
      : coefficients_(std::move(coefficients)) {
    if (coefficients_.empty()) {
      throw std::invalid_argument("FourierDrive needs at least one harmonic");
    }
    for (double b : coefficients_) {
      if (!std::isfinite(b)) {
        throw std::invalid_argument("FourierDrive coefficient is not finite");
      }
    }
  }

  static FourierDrive monochromatic(double b1 = 1.0) {
    return FourierDrive({b1});
  }

  std::size_t harmonics() const { return coefficients_.size(); }
  std::span<const double> coefficients() const { return coefficients_; }

  /// b_n for n >= 1; zero past the stored harmonics.
  double b(std::size_t n) const {
    return (n >= 1 && n <= coefficients_.size()) ? coefficients_[n - 1] : 0.0;
  }

  bool odd_only() const {
    for (std::size_t n = 2; n <= coefficients_.size(); n += 2) {
      if (coefficients_[n - 1] != 0.0) return false;
    }
    return true;
  }

  double operator()(double t) const {
    double g = 0.0;
    for (std::size_t n = 1; n <= coefficients_.size(); ++n) {
      g += coefficients_[n - 1] * std::sin(static_cast<double>(n) * t);
    }
    return g;
  }

  /// Sampled estimate of max_t |g(t)|, accurate enough for sizing photon
  /// cutoffs (never below the true maximum by more than ~0.1%).
  double peak(std::size_t samples = 2048) const {
    double best = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(i) /
                       static_cast<double>(samples);
      best = std::max(best, std::abs((*this)(t)));
    }
    return best;
  }

  bool operator==(const FourierDrive&) const = default;

 private:
  std::vector<double> coefficients_{1.0};
};

/// c_n = -i b_n / 2 for n = -M..M, so that g(t) = sum_n c_n exp(i n t).
class ComplexDriveCoefficients {
 public:
  explicit ComplexDriveCoefficients(const FourierDrive& drive)
      : max_order_(static_cast<int>(drive.harmonics())),
        values_(2 * drive.harmonics() + 1) {
    using namespace std::complex_literals;
    for (int n = 1; n <= max_order_; ++n) {
      const double b = drive.b(static_cast<std::size_t>(n));
      values_[index(n)] = -1i * b / 2.0;
      values_[index(-n)] = 1i * b / 2.0;
    }
  }

  int max_order() const { return max_order_; }

  std::complex<double> operator[](int n) const {
    if (n < -max_order_ || n > max_order_) return {};
    return values_[index(n)];
  }

  /// Reconstructs g(t); the imaginary part is rounding noise only.
  std::complex<double> evaluate(double t) const {
    std::complex<double> g{};
    for (int n = -max_order_; n <= max_order_; ++n) {
      g += values_[index(n)] * std::polar(1.0, static_cast<double>(n) * t);
    }
    return g;
  }

 private:
  std::size_t index(int n) const { return static_cast<std::size_t>(n + max_order_); }

  int max_order_;
  std::vector<std::complex<double>> values_;
};

inline ComplexDriveCoefficients complex_coefficients(const FourierDrive& drive) {
  return ComplexDriveCoefficients(drive);
}

/// Triangle wave with unit fundamental: b_n = (-1)^((n-1)/2) / n^2 for odd n.
inline FourierDrive triangle_drive(std::size_t m_harmonics) {
  if (m_harmonics < 1) throw std::invalid_argument("triangle_drive: m_harmonics must be >= 1");
  std::vector<double> b(m_harmonics, 0.0);
  for (std::size_t n = 1; n <= m_harmonics; n += 2) {
    const double sign = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    b[n - 1] = sign / static_cast<double>(n * n);
  }
  return FourierDrive(std::move(b));
}

}  // namespace floqopt
