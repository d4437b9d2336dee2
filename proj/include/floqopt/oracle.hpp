#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "floqopt/drive.hpp"
#include "floqopt/errors.hpp"
#include "floqopt/propagator.hpp"
#include "floqopt/system.hpp"

// Brute-force time-domain reference for the Floquet results: integrates the
// two-level Schroedinger equation directly, with no photon basis involved.
namespace floqopt::oracle {

/// One-period propagator U(t0 + T, t0).
struct Monodromy {
  Su2 u;
  int steps = 0;
  double t0 = 0.0;

  Eigen::Matrix2cd matrix() const { return u.matrix(); }
};

/// Propagates over `periods` drive periods starting at t0. When `record` is
/// non-null it receives U(t0 + j T/steps * every, t0) after each `every` steps.
inline Su2 propagate(const SystemPoint& p, const FourierDrive& drive, double t0, int steps,
                     int periods = 1, Scheme scheme = Scheme::magnus4,
                     std::vector<Su2>* record = nullptr, int every = 1) {
  // the drive is periodic, so one period of samples serves every period
  const StepPlan plan(drive, steps, scheme, t0);
  Su2 u;
  for (int r = 0; r < periods; ++r) {
    for (int s = 0; s < steps; ++s) {
      u = plan.step(p, s) * u;
      if (record && (s + 1) % every == 0) record->push_back(u);
    }
  }
  return u;
}

inline Monodromy propagate_period(const SystemPoint& p, const FourierDrive& drive, double t0,
                                  int steps = kDefaultSteps, Scheme scheme = Scheme::magnus4) {
  return {propagate(p, drive, t0, steps, 1, scheme), steps, t0};
}

struct OracleQuasiEnergies {
  std::array<double, 2> q{};  ///< folded into [-1/2, 1/2), ascending
  bool near_degenerate = false;  ///< |lambda1 - lambda2| < 1e-12; branch assignment arbitrary
};

/// Quasi-energies from the monodromy eigenphases: U = exp(-i q T) on each
/// Floquet state, with eigenvalues exp(-/+ i theta).
inline OracleQuasiEnergies oracle_quasi_energies(const Monodromy& m) {
  const Su2Eigen e = eigen(m.u);
  OracleQuasiEnergies out{e.quasi_energies, e.near_degenerate};
  if (out.q[1] < out.q[0]) std::swap(out.q[0], out.q[1]);
  return out;
}

enum class TimeWindow {
  uniform,  ///< plain arithmetic mean over the sample grid
  hann,     ///< sin^2 taper across the whole averaging span
};

struct AverageOptions {
  int periods = 200;
  int phase_samples = 16;
  int samples_per_period = 32;
  int steps = kDefaultSteps;
  Scheme scheme = Scheme::magnus4;
  TimeWindow window = TimeWindow::hann;
};

/// |<+| U(t0 + t, t0) |->|^2 averaged over drive phase t0 and elapsed time t.
inline double oracle_average_probability(const SystemPoint& p, const FourierDrive& drive,
                                         const AverageOptions& opt = {}) {
  if (opt.periods < 50) throw ConfigError("oracle averaging needs periods >= 50");
  if (opt.phase_samples < 8) throw ConfigError("oracle averaging needs phase_samples >= 8");
  if (opt.samples_per_period < 32) {
    throw ConfigError("oracle averaging needs samples_per_period >= 32");
  }
  const int spp = opt.samples_per_period;
  // the step grid must land on every sample time
  const int every = (std::max(opt.steps, 256) + spp - 1) / spp;
  const int steps = every * spp;

  const FieldFreeBasis basis = field_free_basis(p);
  const long total_samples = static_cast<long>(opt.periods) * spp;
  double weighted = 0.0;
  double weight_sum = 0.0;
  std::vector<Su2> partial;
  partial.reserve(static_cast<std::size_t>(spp));
  for (int ph = 0; ph < opt.phase_samples; ++ph) {
    const double t0 = kPeriod * ph / opt.phase_samples;
    partial.clear();
    const Su2 mono = propagate(p, drive, t0, steps, 1, opt.scheme, &partial, every);
    // <+| P_j, one row per sample inside a period
    std::vector<Eigen::RowVector2cd> rows;
    rows.reserve(partial.size());
    for (const Su2& pj : partial) rows.push_back(basis.plus.adjoint() * pj.matrix());

    Eigen::Vector2cd state = basis.minus;  // M^r |->
    long index = 0;
    for (int r = 0; r < opt.periods; ++r) {
      for (int j = 0; j < spp; ++j, ++index) {
        const double prob = std::norm((rows[static_cast<std::size_t>(j)] * state)(0));
        double w = 1.0;
        if (opt.window == TimeWindow::hann) {
          const double s = std::sin(std::numbers::pi * (static_cast<double>(index) + 0.5) /
                                    static_cast<double>(total_samples));
          w = s * s;
        }
        weighted += w * prob;
        weight_sum += w;
      }
      state = mono.apply(state);
    }
  }
  return weighted / weight_sum;
}

}  // namespace floqopt::oracle
