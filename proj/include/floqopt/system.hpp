#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

// Static two-level system and its field-free eigenbasis. Energies are in
// units of the drive frequency.
namespace floqopt {

using cplx = std::complex<double>;

struct SystemPoint {
  double eps0 = 0.0;       ///< static bias
  double delta = 0.0;      ///< tunnelling amplitude
  double amplitude = 0.0;  ///< drive strength A

  bool finite() const {
    return std::isfinite(eps0) && std::isfinite(delta) && std::isfinite(amplitude);
  }

  /// A = 0 or delta = 0: the field-free states are Floquet states and P = 0.
  bool trivial() const { return amplitude == 0.0 || delta == 0.0; }
};

/// Eigenstates |-> and |+> of H0 = -(eps0/2) sigma_z - (delta/2) sigma_x in
/// the (alpha, beta) = (sigma_z = +1, sigma_z = -1) basis.
struct FieldFreeBasis {
  Eigen::Vector2cd minus;
  Eigen::Vector2cd plus;
  double energy_minus = 0.0;
  double energy_plus = 0.0;
};

inline Eigen::Matrix2cd static_hamiltonian(double eps0, double delta) {
  Eigen::Matrix2cd h;
  h << -0.5 * eps0, -0.5 * delta, -0.5 * delta, 0.5 * eps0;
  return h;
}

/// |-> is the lower state; each vector's first nonzero component is real
/// and positive. The degenerate point (0, 0) returns the sigma_z basis.
inline FieldFreeBasis field_free_basis(double eps0, double delta) {
  // H0 = -(R/2)(cos(theta) sigma_z + sin(theta) sigma_x)
  const double theta = std::atan2(delta, eps0);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  FieldFreeBasis basis;
  basis.minus << c, s;
  basis.plus << -s, c;
  auto fix_phase = [](Eigen::Vector2cd& v) {
    const cplx lead = std::abs(v(0)) > 0.0 ? v(0) : v(1);
    v *= std::conj(lead) / std::abs(lead);
  };
  fix_phase(basis.minus);
  fix_phase(basis.plus);
  const double half_gap = 0.5 * std::hypot(eps0, delta);
  basis.energy_minus = -half_gap;
  basis.energy_plus = half_gap;
  return basis;
}

inline FieldFreeBasis field_free_basis(const SystemPoint& p) {
  return field_free_basis(p.eps0, p.delta);
}

/// Reduce a quasi-energy into the first Floquet zone [-1/2, 1/2).
inline double fold_quasi_energy(double q) { return q - std::floor(q + 0.5); }

/// Circular distance between two folded quasi-energies.
inline double folded_distance(double a, double b) {
  const double d = std::abs(fold_quasi_energy(a - b));
  return std::min(d, 1.0 - d);
}

}  // namespace floqopt
