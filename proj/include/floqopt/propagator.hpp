#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "floqopt/drive.hpp"
#include "floqopt/errors.hpp"
#include "floqopt/system.hpp"

// One-period time stepping for H(t) = z(t) sigma_z + x sigma_x with
// z(t) = -(eps0 + A g(t))/2 and x = -delta/2.
namespace floqopt {

inline constexpr double kPeriod = 2.0 * std::numbers::pi;

/// SU(2) element [[a, -conj(b)], [b, conj(a)]]. Every propagator of a
/// traceless Hamiltonian lives here, so products stay unitary by construction.
struct Su2 {
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};

  friend Su2 operator*(const Su2& x, const Su2& y) {
    return {x.a * y.a - std::conj(x.b) * y.b, x.b * y.a + std::conj(x.a) * y.b};
  }

  Eigen::Matrix2cd matrix() const {
    Eigen::Matrix2cd m;
    m << a, -std::conj(b), b, std::conj(a);
    return m;
  }

  Eigen::Vector2cd apply(const Eigen::Vector2cd& v) const {
    return {a * v(0) - std::conj(b) * v(1), b * v(0) + std::conj(a) * v(1)};
  }

  /// exp(-i h (x sigma_x + y sigma_y + z sigma_z))
  static Su2 exp(double x, double y, double z, double h) {
    const double r = std::sqrt(x * x + y * y + z * z);
    const double phase = r * h;
    const double c = std::cos(phase);
    // sin(r h) / r, finite as r -> 0
    const double s = r > 0.0 ? std::sin(phase) / r : h;
    return {cplx(c, -s * z), cplx(s * y, -s * x)};
  }
};

enum class Scheme {
  midpoint,  ///< exp(-i H(t_mid) dt), second order
  magnus4,   ///< two-point Gauss-Legendre Magnus, fourth order
};

inline constexpr int kDefaultSteps = 4096;

/// Drive samples at the quadrature nodes of every step of one period
/// starting at t0, so repeated propagation at many system points does not
/// re-evaluate the Fourier series.
class StepPlan {
 public:
  StepPlan(const FourierDrive& drive, int steps = kDefaultSteps, Scheme scheme = Scheme::magnus4,
           double t0 = 0.0)
      : steps_(steps), scheme_(scheme), h_(kPeriod / steps) {
    if (steps < 256) throw ConfigError("propagation needs at least 256 steps per period");
    const int nodes = scheme == Scheme::midpoint ? 1 : 2;
    g_.reserve(static_cast<std::size_t>(steps) * nodes);
    for (int s = 0; s < steps; ++s) {
      const double t = t0 + h_ * s;
      if (scheme == Scheme::midpoint) {
        g_.push_back(drive(t + 0.5 * h_));
      } else {
        g_.push_back(drive(t + (0.5 - kOffset) * h_));
        g_.push_back(drive(t + (0.5 + kOffset) * h_));
      }
    }
  }

  int steps() const { return steps_; }
  Scheme scheme() const { return scheme_; }
  double h() const { return h_; }

  /// Propagator across step s.
  Su2 step(const SystemPoint& p, int s) const {
    const double x = -0.5 * p.delta;
    if (scheme_ == Scheme::midpoint) {
      return Su2::exp(x, 0.0, bias(p, g_[static_cast<std::size_t>(s)]), h_);
    }
    const double z1 = bias(p, g_[2 * static_cast<std::size_t>(s)]);
    const double z2 = bias(p, g_[2 * static_cast<std::size_t>(s) + 1]);
    // Omega = -i h/2 (H1 + H2) + (sqrt3/12) h^2 [H1, H2], and
    // [H1, H2] = 2i x (z1 - z2) sigma_y.
    const double y = -kOffset * h_ * x * (z1 - z2);
    return Su2::exp(x, y, 0.5 * (z1 + z2), h_);
  }

  /// U(t0 + T, t0); with `record`, also U(t0 + (s+1) h, t0) for every step.
  Su2 period(const SystemPoint& p, std::vector<Su2>* record = nullptr) const {
    Su2 u;
    if (record) record->resize(static_cast<std::size_t>(steps_));
    for (int s = 0; s < steps_; ++s) {
      u = step(p, s) * u;
      if (record) (*record)[static_cast<std::size_t>(s)] = u;
    }
    return u;
  }

 private:
  static constexpr double kOffset = 0.28867513459481288225;  // sqrt(3)/6

  static double bias(const SystemPoint& p, double g) { return -0.5 * (p.eps0 + p.amplitude * g); }

  int steps_;
  Scheme scheme_;
  double h_;
  std::vector<double> g_;
};

/// Eigen-decomposition of a one-period propagator U = exp(-i q T) on each
/// Floquet state.
struct Su2Eigen {
  std::array<double, 2> quasi_energies{};  ///< folded; entry 0 belongs to vectors[0]
  std::array<Eigen::Vector2cd, 2> vectors;
  double splitting = 0.0;        ///< |lambda1 - lambda2|
  bool near_degenerate = false;  ///< splitting below 1e-12
};

inline Su2Eigen eigen(const Su2& u) {
  // U = Re(a) I + i M with M = [[z, conj(w)], [w, -z]], z = Im a, w = -i b
  const double z = u.a.imag();
  const cplx w = cplx(0.0, -1.0) * u.b;
  const double s = std::sqrt(z * z + std::norm(w));
  Eigen::Vector2cd up;
  if (s == 0.0) {
    up << 1.0, 0.0;
  } else if (z >= 0.0) {
    up << z + s, w;
  } else {
    up << std::conj(w), s - z;
  }
  up.normalize();
  Su2Eigen e;
  e.vectors[0] = up;  // eigenvalue Re(a) + i s
  e.vectors[1] << -std::conj(up(1)), std::conj(up(0));
  const double theta = std::atan2(s, u.a.real());
  e.quasi_energies = {fold_quasi_energy(-theta / kPeriod), fold_quasi_energy(theta / kPeriod)};
  e.splitting = 2.0 * s;
  e.near_degenerate = e.splitting < 1e-12;
  return e;
}

}  // namespace floqopt
