#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "floqopt/drive.hpp"
#include "floqopt/errors.hpp"
#include "floqopt/floquet.hpp"
#include "floqopt/modes.hpp"
#include "floqopt/parallel.hpp"
#include "floqopt/propagator.hpp"

namespace floqopt {

/// Uniform ascending axis of `count` points from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count < 2) throw ConfigError("axis needs at least 2 points");
  std::vector<double> axis(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) axis[i] = lo + step * static_cast<double>(i);
  axis.back() = hi;
  return axis;
}

class Grid2D {
 public:
  Grid2D(std::vector<double> eps0_axis, std::vector<double> delta_axis)
      : eps0_(std::move(eps0_axis)), delta_(std::move(delta_axis)) {
    check(eps0_, "eps0");
    check(delta_, "delta");
  }

  static Grid2D uniform(double eps0_lo, double eps0_hi, std::size_t eps0_points,
                        double delta_lo, double delta_hi, std::size_t delta_points) {
    return {linspace(eps0_lo, eps0_hi, eps0_points), linspace(delta_lo, delta_hi, delta_points)};
  }

  const std::vector<double>& eps0_axis() const { return eps0_; }
  const std::vector<double>& delta_axis() const { return delta_; }
  std::size_t rows() const { return delta_.size(); }
  std::size_t cols() const { return eps0_.size(); }

 private:
  static void check(const std::vector<double>& axis, const char* name) {
    if (axis.size() < 2) throw ConfigError(std::string(name) + " axis needs at least 2 points");
    const double step = axis[1] - axis[0];
    if (!(step > 0.0)) throw ConfigError(std::string(name) + " axis must be ascending");
    for (std::size_t i = 1; i < axis.size(); ++i) {
      if (!std::isfinite(axis[i]) || std::abs(axis[i] - axis[i - 1] - step) > 1e-12) {
        throw ConfigError(std::string(name) + " axis is not uniform at index " + std::to_string(i));
      }
    }
  }

  std::vector<double> eps0_;
  std::vector<double> delta_;
};

enum class Method {
  propagator,  ///< Floquet modes from the one-period propagator
  matrix,      ///< truncated photon-basis Floquet Hamiltonian
};

inline const char* method_name(Method m) {
  return m == Method::propagator ? "propagator" : "matrix";
}

struct EvalOptions {
  Method method = Method::propagator;
  int n_ph = 0;                ///< matrix route; 0 selects the per-point default cutoff
  int steps = kDefaultSteps;  ///< propagator route, steps per period
};

/// Probability and quasi-energies for one drive at many system points.
class PointEvaluator {
 public:
  PointEvaluator(const FourierDrive& drive, const EvalOptions& opt = {})
      : drive_(drive), opt_(opt) {
    if (opt.method == Method::propagator) plan_.emplace(drive, opt.steps);
  }

  double probability(const SystemPoint& p) const {
    if (plan_) return floquet_modes(p, *plan_).probability;
    return floquet_probability(p, drive_, {opt_.n_ph, 0});
  }

  std::array<double, 2> quasi_energies(const SystemPoint& p) const {
    if (plan_) return floquet_modes(p, *plan_).quasi_energies;
    return folded_quasi_energies(p, drive_, opt_.n_ph);
  }

 private:
  FourierDrive drive_;
  EvalOptions opt_;
  std::optional<StepPlan> plan_;
};

/// value(i, j) is the probability at (delta_axis[i], eps0_axis[j]).
struct ProbabilityMap {
  Grid2D grid;
  std::vector<double> values;  ///< row-major, rows follow delta
  FourierDrive drive;
  double amplitude = 0.0;
  EvalOptions eval{};

  double value(std::size_t i, std::size_t j) const { return values[i * grid.cols() + j]; }
};

namespace detail {

inline std::string describe(const SystemPoint& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(eps0=" << p.eps0 << ", delta=" << p.delta << ", A=" << p.amplitude << ")";
  return os.str();
}

}  // namespace detail

/// Probability at every grid cell. A failing cell is reported with its
/// coordinates.
inline ProbabilityMap probability_map(const Grid2D& grid, const FourierDrive& drive,
                                      double amplitude, const EvalOptions& opt = {},
                                      unsigned threads = default_threads()) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw ConfigError("amplitude must be finite and >= 0");
  }
  const PointEvaluator eval(drive, opt);
  ProbabilityMap map{grid, std::vector<double>(grid.rows() * grid.cols()), drive, amplitude, opt};
  parallel_for(map.values.size(), threads, [&](std::size_t cell) {
    const SystemPoint p{grid.eps0_axis()[cell % grid.cols()], grid.delta_axis()[cell / grid.cols()],
                        amplitude};
    double value = 0.0;
    try {
      value = eval.probability(p);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at " + detail::describe(p));
    }
    if (!std::isfinite(value)) throw NumericalError("non-finite probability at " + detail::describe(p));
    map.values[cell] = value;
  });
  return map;
}

struct BandRow {
  double eps0 = 0.0;
  std::array<double, 2> q{};  ///< folded, ascending
};

inline std::vector<BandRow> band_diagram(double delta, const std::vector<double>& eps0_axis,
                                         const FourierDrive& drive, double amplitude,
                                         const EvalOptions& opt = {},
                                         unsigned threads = default_threads()) {
  if (eps0_axis.empty()) throw ConfigError("band diagram needs a non-empty eps0 axis");
  const PointEvaluator eval(drive, opt);
  std::vector<BandRow> rows(eps0_axis.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const SystemPoint p{eps0_axis[i], delta, amplitude};
    try {
      rows[i] = {p.eps0, eval.quasi_energies(p)};
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at " + detail::describe(p));
    }
  });
  return rows;
}

/// Smallest folded gap between the two bands across a diagram.
inline double min_gap(const std::vector<BandRow>& rows) {
  double best = 1.0;
  for (const auto& r : rows) best = std::min(best, folded_distance(r.q[0], r.q[1]));
  return best;
}

struct SpectrumRow {
  double eps0 = 0.0;
  double integrated = 0.0;
};

/// Trapezoid rule along delta for each eps0 column.
inline std::vector<SpectrumRow> integrated_spectrum(const ProbabilityMap& map) {
  const auto& delta = map.grid.delta_axis();
  if (delta.size() < 3) throw ConfigError("integrated spectrum needs at least 3 delta points");
  std::vector<SpectrumRow> out(map.grid.cols());
  for (std::size_t j = 0; j < out.size(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 1; i < delta.size(); ++i) {
      sum += 0.5 * (delta[i] - delta[i - 1]) * (map.value(i - 1, j) + map.value(i, j));
    }
    out[j] = {map.grid.eps0_axis()[j], sum};
  }
  return out;
}

struct ObjectiveDomain {
  std::array<double, 2> eps0_range{4.8, 5.2};
  std::array<double, 2> delta_range{0.0, 10.0};
  std::size_t eps0_points = 9;
  std::size_t delta_points = 101;

  void validate() const {
    if (!(eps0_range[0] < eps0_range[1])) throw ConfigError("domain eps0 range needs lo < hi");
    if (!(delta_range[0] < delta_range[1])) throw ConfigError("domain delta range needs lo < hi");
    if (eps0_points < 3 || delta_points < 3) {
      throw ConfigError("domain quadrature needs at least 3 points per axis");
    }
  }

  double area() const {
    return (eps0_range[1] - eps0_range[0]) * (delta_range[1] - delta_range[0]);
  }

  Grid2D grid() const {
    validate();
    return Grid2D::uniform(eps0_range[0], eps0_range[1], eps0_points, delta_range[0],
                           delta_range[1], delta_points);
  }
};

/// Cumulative probability over the domain: mean over the quadrature grid
/// times the domain area.
inline double objective(const FourierDrive& drive, double amplitude, const ObjectiveDomain& domain,
                        const EvalOptions& opt = {}, unsigned threads = 1) {
  const ProbabilityMap map = probability_map(domain.grid(), drive, amplitude, opt, threads);
  double sum = 0.0;
  for (double v : map.values) sum += v;
  return sum / static_cast<double>(map.values.size()) * domain.area();
}

}  // namespace floqopt
