#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "floqopt/bessel.hpp"
#include "floqopt/drive.hpp"
#include "floqopt/errors.hpp"
#include "floqopt/lapack.hpp"
#include "floqopt/system.hpp"

// Floquet treatment of the driven two-level system
//
//   H(t) = -(eps0/2 + A/2 g(t)) sigma_z - (delta/2) sigma_x
//
// with every energy measured in units of the drive frequency.
namespace floqopt {

/// Photon cutoff: ceil(A * max|g|) + ceil(|eps0|) + 16 + 2M for M harmonics,
/// at least 32 and at least M + 2.
inline int default_photon_cutoff(const SystemPoint& p, const FourierDrive& drive) {
  const double reach = std::abs(p.amplitude) * drive.peak();
  const int n = static_cast<int>(std::ceil(reach)) +
                static_cast<int>(std::ceil(std::abs(p.eps0))) + 16 +
                2 * static_cast<int>(drive.harmonics());
  return std::max({32, n, static_cast<int>(drive.harmonics()) + 2});
}

/// Dense truncated Floquet Hamiltonian over photon blocks n = -N..N with
/// block (n, m) = H^[n-m] + n delta_nm.
struct FloquetMatrix {
  Eigen::MatrixXcd h;
  int n_ph = 0;

  Eigen::Index dimension() const { return h.rows(); }
  /// Row of |spin, n> with spin 0 = alpha, 1 = beta.
  Eigen::Index index(int photon, int spin) const { return 2 * (photon + n_ph) + spin; }
};

namespace detail {

inline void check_cutoff(const FourierDrive& drive, int n_ph) {
  const int needed = static_cast<int>(drive.harmonics()) + 2;
  if (n_ph < needed) {
    throw ConfigError("photon cutoff " + std::to_string(n_ph) + " clips drive couplings (need >= " +
                      std::to_string(needed) + ")");
  }
}

// Gauge-transformed Hamiltonian for odd-harmonic drives: conjugating block n
// by i^n turns every coupling real, so a real symmetric solver applies.
inline Eigen::MatrixXd real_floquet_matrix(const SystemPoint& p, const FourierDrive& drive,
                                           int n_ph) {
  const int dim = 2 * (2 * n_ph + 1);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const int m_max = static_cast<int>(drive.harmonics());
  for (int n = -n_ph; n <= n_ph; ++n) {
    const int r = 2 * (n + n_ph);
    h(r, r) = -0.5 * p.eps0 + n;
    h(r + 1, r + 1) = 0.5 * p.eps0 + n;
    h(r, r + 1) = h(r + 1, r) = -0.5 * p.delta;
    for (int d = 1; d <= m_max && n - d >= -n_ph; d += 2) {
      const double sign = ((d - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
      const double s = 0.25 * p.amplitude * drive.b(static_cast<std::size_t>(d)) * sign;
      const int c = 2 * (n - d + n_ph);
      h(r, c) = h(c, r) = s;
      h(r + 1, c + 1) = h(c + 1, r + 1) = -s;
    }
  }
  return h;
}

}  // namespace detail

inline FloquetMatrix build_floquet_hamiltonian(const SystemPoint& p, const FourierDrive& drive,
                                               int n_ph) {
  detail::check_cutoff(drive, n_ph);
  const ComplexDriveCoefficients c(drive);
  FloquetMatrix fm;
  fm.n_ph = n_ph;
  const int dim = 2 * (2 * n_ph + 1);
  fm.h = Eigen::MatrixXcd::Zero(dim, dim);
  const Eigen::Matrix2cd h0 = static_hamiltonian(p.eps0, p.delta);
  for (int n = -n_ph; n <= n_ph; ++n) {
    const auto r = fm.index(n, 0);
    fm.h.block<2, 2>(r, r) = h0 + static_cast<double>(n) * Eigen::Matrix2cd::Identity();
    for (int m = -n_ph; m <= n_ph; ++m) {
      const int d = n - m;
      if (d == 0 || std::abs(d) > c.max_order()) continue;
      // H^[d] = -(A/2) c_d sigma_z
      const cplx coupling = -0.5 * p.amplitude * c[d];
      const auto col = fm.index(m, 0);
      fm.h(r, col) = coupling;
      fm.h(r + 1, col + 1) = -coupling;
    }
  }
  return fm;
}

struct FloquetSpectrum {
  Eigen::VectorXd quasi_energies;  ///< ascending
  Eigen::MatrixXcd vectors;        ///< column j is the eigenvector of quasi_energies[j]
  int n_ph = 0;

  Eigen::Index index(int photon, int spin) const { return 2 * (photon + n_ph) + spin; }

  /// Norm-squared weight of eigenvector j on the outermost `blocks` photon
  /// blocks at each end of the truncation.
  double edge_weight(Eigen::Index j, int blocks = 4) const {
    double w = 0.0;
    for (int b = 0; b < blocks; ++b) {
      for (int spin = 0; spin < 2; ++spin) {
        w += std::norm(vectors(index(-n_ph + b, spin), j));
        w += std::norm(vectors(index(n_ph - b, spin), j));
      }
    }
    return w;
  }

  bool interior(Eigen::Index j, double tolerance = 1e-6) const {
    return edge_weight(j) <= tolerance;
  }
};

inline FloquetSpectrum diagonalize(const FloquetMatrix& m) {
  auto eig = lapack::eigh(m.h);
  if (!eig.values.allFinite()) throw NumericalError("eigensolver produced non-finite quasi-energies");
  return {std::move(eig.values), std::move(eig.vectors), m.n_ph};
}

/// Long-time averaged |-> to |+> probability summed over k-photon channels
/// |k| <= window and over every Floquet eigenvector.
inline double transition_probability(const FloquetSpectrum& s, const FieldFreeBasis& basis,
                                     int window) {
  if (window < 0 || window > s.n_ph) {
    throw ConfigError("projection window " + std::to_string(window) + " outside [0, n_ph = " +
                      std::to_string(s.n_ph) + "]");
  }
  const Eigen::Index dim = s.vectors.cols();
  const auto origin = s.index(0, 0);
  // <q_j|-,0> for every j
  Eigen::VectorXd start(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    start(j) = std::norm(basis.minus.dot(s.vectors.col(j).segment<2>(origin)));
  }
  double total = 0.0;
  for (int k = -window; k <= window; ++k) {
    const auto row = s.index(k, 0);
    for (Eigen::Index j = 0; j < dim; ++j) {
      total += std::norm(basis.plus.dot(s.vectors.col(j).segment<2>(row))) * start(j);
    }
  }
  return total;
}

/// The two Floquet states whose quasi-energies lie in (-1/2, 1/2]; every
/// other eigenvector of the untruncated problem is a photon-shifted copy.
struct InteriorStates {
  std::array<double, 2> quasi_energies{};
  Eigen::Matrix<cplx, Eigen::Dynamic, 2> vectors;
  int n_ph = 0;

  Eigen::Index index(int photon, int spin) const { return 2 * (photon + n_ph) + spin; }
};

/// Solves only for the two interior eigenpairs. Returns nullopt when the
/// truncated spectrum does not hold exactly two eigenvalues in (-1/2, 1/2].
inline std::optional<InteriorStates> interior_states(const SystemPoint& p,
                                                     const FourierDrive& drive, int n_ph) {
  detail::check_cutoff(drive, n_ph);
  InteriorStates out;
  out.n_ph = n_ph;
  if (drive.odd_only()) {
    auto eig = lapack::eigh_range(detail::real_floquet_matrix(p, drive, n_ph), -0.5, 0.5);
    if (eig.values.size() != 2) return std::nullopt;
    out.vectors = eig.vectors.cast<cplx>();
    // undo the gauge: block n picks up i^n
    for (int n = -n_ph; n <= n_ph; ++n) {
      const cplx phase = std::polar(1.0, 0.5 * std::numbers::pi * n);
      out.vectors.middleRows<2>(out.index(n, 0)) *= phase;
    }
    out.quasi_energies = {eig.values(0), eig.values(1)};
  } else {
    auto eig = lapack::eigh_range(build_floquet_hamiltonian(p, drive, n_ph).h, -0.5, 0.5);
    if (eig.values.size() != 2) return std::nullopt;
    out.vectors = std::move(eig.vectors);
    out.quasi_energies = {eig.values(0), eig.values(1)};
  }
  if (!std::isfinite(out.quasi_energies[0]) || !std::isfinite(out.quasi_energies[1])) {
    throw NumericalError("eigensolver produced non-finite quasi-energies");
  }
  return out;
}

/// Same observable as transition_probability, summed over photon-shifted
/// copies analytically: P = sum_gamma W_-(gamma) W_+(gamma), with W_s the
/// total weight of Floquet state gamma on field-free state s.
inline double transition_probability(const InteriorStates& s, const FieldFreeBasis& basis) {
  double total = 0.0;
  for (int g = 0; g < 2; ++g) {
    double w_minus = 0.0;
    double w_plus = 0.0;
    for (int n = -s.n_ph; n <= s.n_ph; ++n) {
      const auto block = s.vectors.col(g).segment<2>(s.index(n, 0));
      w_minus += std::norm(basis.minus.dot(block));
      w_plus += std::norm(basis.plus.dot(block));
    }
    total += w_minus * w_plus;
  }
  return total;
}

struct FloquetOptions {
  int n_ph = 0;    ///< 0 selects default_photon_cutoff
  int window = 0;  ///< 0 selects n_ph (full-spectrum route only)
};

/// Transition probability at one point with the default truncation. Uses
/// the two-state solve and falls back to the full spectrum when needed.
inline double floquet_probability(const SystemPoint& p, const FourierDrive& drive,
                                  FloquetOptions opt = {}) {
  const int n_ph = opt.n_ph > 0 ? opt.n_ph : default_photon_cutoff(p, drive);
  if (p.trivial()) return 0.0;
  const FieldFreeBasis basis = field_free_basis(p);
  if (auto states = interior_states(p, drive, n_ph)) {
    return transition_probability(*states, basis);
  }
  const auto spectrum = diagonalize(build_floquet_hamiltonian(p, drive, n_ph));
  return transition_probability(spectrum, basis, opt.window > 0 ? opt.window : n_ph);
}

/// The two quasi-energies folded into [-1/2, 1/2), ascending.
inline std::array<double, 2> folded_quasi_energies(const SystemPoint& p,
                                                   const FourierDrive& drive, int n_ph = 0) {
  if (n_ph <= 0) n_ph = default_photon_cutoff(p, drive);
  std::array<double, 2> q{};
  if (auto states = interior_states(p, drive, n_ph)) {
    q = {fold_quasi_energy(states->quasi_energies[0]), fold_quasi_energy(states->quasi_energies[1])};
  } else {
    // The two eigenvalues nearest zero are interior and belong to distinct
    // ladders unless the spectrum is degenerate.
    const auto s = diagonalize(build_floquet_hamiltonian(p, drive, n_ph));
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < s.quasi_energies.size(); ++j) {
      if (std::abs(s.quasi_energies(j)) < std::abs(s.quasi_energies(best))) best = j;
    }
    const Eigen::Index other =
        best + 1 < s.quasi_energies.size() &&
                (best == 0 || std::abs(s.quasi_energies(best + 1)) < std::abs(s.quasi_energies(best - 1)))
            ? best + 1
            : best - 1;
    q = {fold_quasi_energy(s.quasi_energies(best)), fold_quasi_energy(s.quasi_energies(other))};
  }
  if (q[1] < q[0]) std::swap(q[0], q[1]);
  return q;
}

/// Folded gap between the two Floquet bands.
inline double quasi_energy_gap(const SystemPoint& p, const FourierDrive& drive, int n_ph = 0) {
  const auto q = folded_quasi_energies(p, drive, n_ph);
  return folded_distance(q[0], q[1]);
}

/// Leading-order monochromatic result: a sum of Lorentzian k-photon lines
/// with effective splitting delta * J_k(A).
inline double analytic_probability(const SystemPoint& p, int k_max) {
  if (k_max < 1) throw ConfigError("analytic_probability: k_max must be >= 1");
  double total = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double split = p.delta * bessel_j_signed(k, p.amplitude);
    const double num = split * split;
    if (num == 0.0) continue;
    const double detune = k - p.eps0;
    total += 0.5 * num / (num + detune * detune);
  }
  return total;
}

}  // namespace floqopt
