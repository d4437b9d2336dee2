#pragma once

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "floqopt/errors.hpp"
#include "floqopt/propagator.hpp"
#include "floqopt/system.hpp"

// Floquet states from the one-period propagator instead of the photon
// basis. The Floquet mode phi(t) = exp(i q t) U(t, 0) v is periodic, and by
// Parseval its total weight on a field-free state over all photon blocks is
// the time average of |<s|phi(t)>|^2. That gives the interior-state
// probability sum over gamma of W_-(gamma) W_+(gamma) without truncation.
namespace floqopt {

/// Monodromy splittings below this leave the mode pair to rounding noise.
inline constexpr double kModeDegeneracy = 1e-10;

struct FloquetModes {
  std::array<double, 2> quasi_energies{};  ///< folded into [-1/2, 1/2), ascending
  double probability = 0.0;
  bool near_degenerate = false;  ///< mode pair not unique; field-free states used
};

inline FloquetModes floquet_modes(const SystemPoint& p, const StepPlan& plan) {
  thread_local std::vector<Su2> path;
  const Su2 mono = plan.period(p, &path);
  Su2Eigen e = eigen(mono);
  const FieldFreeBasis basis = field_free_basis(p);
  FloquetModes out;
  out.near_degenerate = e.splitting < kModeDegeneracy;
  if (out.near_degenerate) {
    // any pair is a Floquet basis here; take the field-free states at t = 0
    e.vectors = {basis.minus, basis.plus};
  }
  // The trapezoid rule on a periodic integrand over the step grid.
  const double n = static_cast<double>(path.size());
  for (const auto& v : e.vectors) {
    if (p.trivial()) break;
    double w_minus = 0.0;
    double w_plus = 0.0;
    for (const Su2& u : path) {
      const Eigen::Vector2cd phi = u.apply(v);
      w_minus += std::norm(basis.minus.dot(phi));
      w_plus += std::norm(basis.plus.dot(phi));
    }
    out.probability += (w_minus / n) * (w_plus / n);
  }
  if (!std::isfinite(out.probability)) throw NumericalError("propagator produced a non-finite probability");
  out.quasi_energies = e.quasi_energies;
  if (out.quasi_energies[1] < out.quasi_energies[0]) {
    std::swap(out.quasi_energies[0], out.quasi_energies[1]);
  }
  return out;
}

inline FloquetModes floquet_modes(const SystemPoint& p, const FourierDrive& drive,
                                  int steps = kDefaultSteps) {
  return floquet_modes(p, StepPlan(drive, steps));
}

}  // namespace floqopt
