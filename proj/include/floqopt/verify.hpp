#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "floqopt/drive.hpp"
#include "floqopt/floquet.hpp"
#include "floqopt/modes.hpp"
#include "floqopt/optimizer.hpp"
#include "floqopt/oracle.hpp"
#include "floqopt/parallel.hpp"

// Cross-checks between the Floquet routes, the time-domain oracle and the
// perturbative formula.
namespace floqopt::verify {

struct TestPoint {
  SystemPoint p;
  FourierDrive drive;
  std::string drive_name;
};

/// Largest folded distance between two quasi-energy pairs under the better
/// of the two possible pairings.
inline double pair_mismatch(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  const double direct = std::max(folded_distance(a[0], b[0]), folded_distance(a[1], b[1]));
  const double crossed = std::max(folded_distance(a[0], b[1]), folded_distance(a[1], b[0]));
  return std::min(direct, crossed);
}

struct PointSpec {
  std::uint64_t seed = 20240601;
  std::size_t count = 20;
  double eps0_max = 10.0;
  double delta_max = 10.0;
  double amplitude_max = 9.0;
  std::size_t triangle_harmonics = 9;
  /// Points whose quasi-energy splitting is below this are skipped.
  double min_splitting = 0.02;
};

/// Seeded points alternating between the monochromatic and triangle drives.
/// Draws continue until `count` points clear the degeneracy filter; the
/// number of rejected draws is reported through `skipped`.
inline std::vector<TestPoint> random_points(const PointSpec& spec, std::size_t* skipped = nullptr) {
  Rng rng(spec.seed);
  const FourierDrive mono = FourierDrive::monochromatic();
  const FourierDrive tri = triangle_drive(spec.triangle_harmonics);
  std::vector<TestPoint> out;
  std::size_t rejected = 0;
  for (std::size_t draw = 0; out.size() < spec.count; ++draw) {
    if (draw > 100 * spec.count) throw NumericalError("too many near-degenerate draws");
    const SystemPoint p{spec.eps0_max * rng.uniform(), spec.delta_max * rng.uniform(),
                        spec.amplitude_max * rng.uniform()};
    const bool use_tri = out.size() % 2 == 1;
    const FourierDrive& d = use_tri ? tri : mono;
    const auto q = oracle::oracle_quasi_energies(oracle::propagate_period(p, d, 0.0));
    if (folded_distance(q.q[0], q.q[1]) < spec.min_splitting) {
      ++rejected;
      continue;
    }
    out.push_back({p, d, use_tri ? "triangle:" + std::to_string(spec.triangle_harmonics) : "mono"});
  }
  if (skipped) *skipped = rejected;
  return out;
}

struct EquivalenceRow {
  TestPoint point;
  double q_mismatch = 0.0;
  double p_floquet = 0.0;
  double p_oracle = 0.0;
  double p_modes = 0.0;
};

struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;
  std::size_t skipped = 0;
  double max_q_mismatch = 0.0;
  double max_p_deviation = 0.0;        ///< matrix route vs oracle average
  double max_route_deviation = 0.0;    ///< matrix route vs propagator route
};

/// Quasi-energies and probabilities of the matrix route against the
/// time-domain oracle. Skip the averaged oracle with `with_average = false`.
inline EquivalenceReport equivalence(const PointSpec& spec, const oracle::AverageOptions& avg,
                                     bool with_average = true,
                                     unsigned threads = default_threads()) {
  EquivalenceReport rep;
  const auto points = random_points(spec, &rep.skipped);
  rep.rows.resize(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    const auto& tp = points[i];
    EquivalenceRow row{tp};
    const auto mono = oracle::propagate_period(tp.p, tp.drive, 0.0);
    row.q_mismatch =
        pair_mismatch(folded_quasi_energies(tp.p, tp.drive), oracle::oracle_quasi_energies(mono).q);
    row.p_floquet = floquet_probability(tp.p, tp.drive);
    row.p_modes = floquet_modes(tp.p, tp.drive).probability;
    if (with_average) row.p_oracle = oracle::oracle_average_probability(tp.p, tp.drive, avg);
    rep.rows[i] = row;
  });
  for (const auto& r : rep.rows) {
    rep.max_q_mismatch = std::max(rep.max_q_mismatch, r.q_mismatch);
    if (with_average) {
      rep.max_p_deviation = std::max(rep.max_p_deviation, std::abs(r.p_floquet - r.p_oracle));
    }
    rep.max_route_deviation = std::max(rep.max_route_deviation, std::abs(r.p_floquet - r.p_modes));
  }
  return rep;
}

struct AnalyticRow {
  int k = 0;
  double floquet = 0.0;
  double analytic = 0.0;
  double relative = 0.0;     ///< |floquet - analytic| / analytic
  double bessel = 0.0;       ///< J_k(A)
  double single_term = 0.0;  ///< relative distance of floquet from 0.5
};

/// Resonance centres eps0 = k of the monochromatic drive in the weak
/// tunnelling limit.
inline std::vector<AnalyticRow> analytic_limit(double delta = 0.05, double amplitude = 6.0,
                                               int k_max = 5) {
  std::vector<AnalyticRow> rows;
  const FourierDrive mono = FourierDrive::monochromatic();
  for (int k = 1; k <= k_max; ++k) {
    const SystemPoint p{static_cast<double>(k), delta, amplitude};
    AnalyticRow r;
    r.k = k;
    r.floquet = floquet_probability(p, mono);
    r.analytic = analytic_probability(p, 2 * k_max);
    r.relative = std::abs(r.floquet - r.analytic) / r.analytic;
    r.bessel = bessel_j(k, amplitude);
    r.single_term = std::abs(r.floquet - 0.5) / 0.5;
    rows.push_back(r);
  }
  return rows;
}

struct NullRow {
  std::string name;
  double floquet = 0.0;
  double modes = 0.0;
  double oracle = 0.0;
};

/// A = 0 and delta = 0 cases, where every route must give zero.
inline std::vector<NullRow> null_cases() {
  const FourierDrive mono = FourierDrive::monochromatic();
  const FourierDrive tri = triangle_drive(9);
  const std::vector<std::pair<std::string, TestPoint>> cases = {
      {"A=0 (eps0=3, delta=2)", {{3.0, 2.0, 0.0}, mono, "mono"}},
      {"A=0 (eps0=0.4, delta=7)", {{0.4, 7.0, 0.0}, tri, "triangle:9"}},
      {"delta=0 (eps0=5, A=9)", {{5.0, 0.0, 9.0}, mono, "mono"}},
      {"delta=0 (eps0=2.5, A=6)", {{2.5, 0.0, 6.0}, tri, "triangle:9"}},
  };
  oracle::AverageOptions avg;
  avg.periods = 50;
  avg.phase_samples = 8;
  std::vector<NullRow> rows;
  for (const auto& [name, tp] : cases) {
    rows.push_back({name, floquet_probability(tp.p, tp.drive),
                    floquet_modes(tp.p, tp.drive).probability,
                    oracle::oracle_average_probability(tp.p, tp.drive, avg)});
  }
  return rows;
}

}  // namespace floqopt::verify
