// Acceptance gate: one PASS/FAIL line per criterion, followed by
// diagnostics. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "floqopt/floqopt.hpp"
#include "floqopt/verify.hpp"

using namespace floqopt;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
}

void note(const std::string& detail) {
  std::printf("       note: %s\n", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Full width at half maximum of a single peak of f inside [lo, hi]. NaN when
// f does not drop below half maximum within `reach` of the peak.
double fwhm(const std::function<double(double)>& f, double lo, double hi, double scan_step,
            double* peak_at = nullptr, double reach = 0.5) {
  double best = lo, best_v = -1.0;
  for (double x = lo; x <= hi; x += scan_step) {
    const double v = f(x);
    if (v > best_v) best_v = v, best = x;
  }
  double a = best - scan_step, b = best + scan_step;
  for (int i = 0; i < 60; ++i) {
    const double m1 = a + 0.381966 * (b - a), m2 = a + 0.618034 * (b - a);
    (f(m1) > f(m2) ? b : a) = f(m1) > f(m2) ? m2 : m1;
  }
  const double x0 = 0.5 * (a + b);
  const double half = 0.5 * f(x0);
  auto edge = [&](double dir) {
    double inside = x0, outside = x0;
    double step = scan_step / 4;
    while (f(outside) > half) {
      if (std::abs(outside - x0) > reach) return std::nan("");
      inside = outside, outside += dir * step, step *= 1.5;
    }
    for (int i = 0; i < 80; ++i) {
      const double m = 0.5 * (inside + outside);
      (f(m) > half ? inside : outside) = m;
    }
    return 0.5 * (inside + outside);
  };
  if (peak_at) *peak_at = x0;
  return edge(1.0) - edge(-1.0);
}

struct DeskRun {
  OptimizeResult result;
  double gap = 0.0;
  unsigned threads = 0;
};

const ObjectiveDomain kDomain{};  // 4.8 <= eps0 <= 5.2, 0 <= delta <= 10, 9 x 101
constexpr double kAmplitude = 9.0;
constexpr std::uint64_t kSeed = 20240601;

std::vector<double> gap_axis() { return linspace(4.8, 5.2, 401); }

DeskRun desk_run(unsigned threads) {
  IslandConfig c;
  c.islands = 4;
  c.population = 16;
  c.generations = 30;
  c.seed = kSeed;
  c.threads = threads;
  DeskRun run;
  run.threads = threads;
  run.result = optimize(c, kDomain, kAmplitude, Bounds::alternating(5));
  run.gap = min_gap(band_diagram(4.0, gap_axis(), decode(run.result.x), kAmplitude, {}, threads));
  return run;
}

std::string vec(const DecisionVector& x) {
  std::string s = "[";
  for (std::size_t i = 0; i < x.size(); ++i) s += fmt(i ? ", %.4f" : "%.4f", x[i]);
  return s + "]";
}

}  // namespace

int main() {
  const unsigned threads = default_threads();
  std::printf("acceptance run with %u worker thread(s)\n", threads);

  // 1 and 2 share one seeded point set.
  verify::PointSpec spec;  // seed 20240601, 20 points, A <= 9, eps0, delta in [0, 10]
  {
    auto t = Clock::now();
    oracle::AverageOptions stated;
    stated.periods = 200;
    stated.phase_samples = 16;
    const auto rep = verify::equivalence(spec, stated, false, threads);
    const double t1 = seconds_since(t);
    report("C1 oracle quasi-energy equivalence", rep.max_q_mismatch <= 1e-8 && t1 <= 60.0,
           fmt("max mismatch %.2e (tol 1e-8) over %zu points, %zu near-degenerate draws skipped, %.1fs (limit 60s)",
               rep.max_q_mismatch, rep.rows.size(), rep.skipped, t1));

    t = Clock::now();
    const auto rep2 = verify::equivalence(spec, stated, true, threads);
    const double t2 = seconds_since(t);
    report("C2 probability equivalence (16 phases x 200 periods)",
           rep2.max_p_deviation <= 1e-3 && t2 <= 300.0,
           fmt("max |P_floquet - P_oracle| %.2e (tol 1e-3), %.1fs (limit 300s)", rep2.max_p_deviation, t2));
    for (const auto& r : rep2.rows) {
      if (std::abs(r.p_floquet - r.p_oracle) > 1e-3) {
        note(fmt("eps0=%.3f delta=%.3f A=%.3f %s: floquet %.6f oracle %.6f", r.point.p.eps0, r.point.p.delta,
                 r.point.p.amplitude, r.point.drive_name.c_str(), r.p_floquet, r.p_oracle));
      }
    }
    oracle::AverageOptions dense = stated;
    dense.phase_samples = 64;
    t = Clock::now();
    const auto rep3 = verify::equivalence(spec, dense, true, threads);
    note(fmt("same points with 64 phases: max deviation %.2e (%.1fs); matrix vs propagator route %.2e",
             rep3.max_p_deviation, seconds_since(t), rep3.max_route_deviation));
  }

  {
    const auto rows = verify::analytic_limit(0.05, 6.0, 5);
    double worst = 0.0, worst_single = 0.0;
    std::string detail;
    for (const auto& r : rows) {
      worst = std::max(worst, r.relative);
      if (std::abs(r.bessel) >= 0.05) worst_single = std::max(worst_single, r.single_term);
      detail += fmt(" k=%d:%.2e", r.k, r.relative);
    }
    report("C3 analytic limit", worst <= 0.02 && worst_single <= 0.02,
           fmt("max relative deviation %.2e, max distance from 1/2 %.2e (tol 2%%);", worst, worst_single) + detail);
  }

  {
    const auto mono = FourierDrive::monochromatic();
    auto width = [&](double amplitude) {
      return fwhm([&](double e) { return floquet_probability({e, 0.2, amplitude}, mono); }, 0.8, 1.2, 5e-4);
    };
    const double w30 = width(3.0), w37 = width(3.7);
    const double expect = std::abs(bessel_j(1, 3.7) / bessel_j(1, 3.0));
    const double dev = std::abs(w37 / w30 - expect) / expect;
    report("C4 CDT width scaling", dev <= 0.10,
           fmt("FWHM %.5f (A=3.0), %.5f (A=3.7), ratio %.4f vs |J1(3.7)/J1(3.0)| %.4f, deviation %.1f%% (tol 10%%)",
               w30, w37, w37 / w30, expect, 100 * dev));
  }

  {
    auto t = Clock::now();
    const auto grid = Grid2D::uniform(0.0, 10.0, 201, 0.0, 10.0, 201);
    const auto mono_map = probability_map(grid, FourierDrive::monochromatic(), 6.0, {}, threads);
    const auto tri_map = probability_map(grid, triangle_drive(15), 6.0, {}, threads);
    const double t5 = seconds_since(t);

    // a ridge near eps0 = k: some row with delta <= 2 peaks within 0.25 of k
    // and stands well above the midpoints k +/- 0.5
    int ridges = 0;
    std::string detail;
    for (int k = 1; k <= 5; ++k) {
      bool found = false;
      for (std::size_t i = 1; i < grid.rows() && grid.delta_axis()[i] <= 2.0 && !found; ++i) {
        double peak = 0.0;
        for (std::size_t j = 0; j < grid.cols(); ++j) {
          if (std::abs(grid.eps0_axis()[j] - k) <= 0.25) peak = std::max(peak, mono_map.value(i, j));
        }
        const auto jl = static_cast<std::size_t>(std::lround((k - 0.5) / 0.05));
        const auto jr = static_cast<std::size_t>(std::lround((k + 0.5) / 0.05));
        const double side = std::max(mono_map.value(i, jl), mono_map.value(i, jr));
        found = peak >= 0.25 && peak >= 4.0 * side;
      }
      ridges += found;
      detail += fmt(" k=%d:%s", k, found ? "yes" : "no");
    }
    report("C5a ridges at eps0 ~ k, k = 1..5", ridges == 5, fmt("%d/5 ridges;", ridges) + detail);

    const auto mono = FourierDrive::monochromatic();
    double at3 = 0.0;
    const double w3 = fwhm([&](double e) { return floquet_probability({e, 1.0, 6.0}, mono); }, 2.7, 3.3, 1e-3, &at3);
    report("C5b k=3 ridge FWHM at delta = 1", w3 < 0.05,
           fmt("FWHM %.4f at eps0 = %.4f (limit 0.05); Lorentzian estimate 2*delta*|J3(6)| = %.4f", w3, at3,
               2.0 * std::abs(bessel_j(3, 6.0))));
    for (int k : {2, 4, 5}) {
      const double w = fwhm([&](double e) { return floquet_probability({e, 1.0, 6.0}, mono); }, k - 0.3, k + 0.3, 1e-3);
      note(std::isnan(w) ? fmt("k=%d at delta = 1: no half-maximum crossing within 0.5 of the peak", k)
                         : fmt("k=%d FWHM at delta = 1: %.4f", k, w));
    }
    const double w3small =
        fwhm([&](double e) { return floquet_probability({e, 0.2, 6.0}, mono); }, 2.8, 3.2, 2e-4);
    note(fmt("k=3 FWHM at delta = 0.2: %.4f", w3small));

    const double pm = mono_map.value(40, 180), pt = tri_map.value(40, 180);
    report("C5c triangle beats monochromatic at (9, 2)", pt > pm,
           fmt("triangle %.6f vs monochromatic %.6f; both maps %.1fs (limit 600s)", pt, pm, t5));
    if (t5 > 600.0) report("C5 runtime", false, fmt("%.1fs", t5));
  }

  const double baseline = objective(FourierDrive::monochromatic(0.66), kAmplitude, kDomain);
  const double baseline_gap =
      min_gap(band_diagram(4.0, gap_axis(), FourierDrive::monochromatic(0.66), kAmplitude, {}, threads));
  auto t = Clock::now();
  const DeskRun desk = desk_run(threads);
  const double desk_time = seconds_since(t);
  report("C6a desk-scale suppression", desk.result.f <= 0.5 * baseline,
         fmt("objective %.6f = %.1f%% of baseline %.6f (limit 50%%), X = %s, %.1fs on %u thread(s)",
             desk.result.f, 100 * desk.result.f / baseline, baseline, vec(desk.result.x).c_str(), desk_time,
             threads));

  OptimizeResult wide;
  {
    t = Clock::now();
    IslandConfig c;
    c.islands = 48;
    c.population = 10;
    c.generations = 20;
    c.seed = kSeed;
    c.threads = threads;
    wide = optimize(c, kDomain, kAmplitude, Bounds::alternating(10));
    const double wide_time = seconds_since(t);
    const FourierDrive drive = decode(wide.x);
    const auto map = probability_map(Grid2D::uniform(3.0, 7.0, 81, 0.0, 10.0, 101), drive, kAmplitude, {}, threads);
    const auto spectrum = integrated_spectrum(map);
    const double i4 = spectrum[20].integrated, i5 = spectrum[40].integrated, i6 = spectrum[60].integrated;
    report("C6b 48-island N = 10 preset and spectral dip at eps0 = 5", i5 < i4 && i5 < i6,
           fmt("integrated P at eps0 = 4, 5, 6: %.4f, %.4f, %.4f; objective %.6f = %.1f%% of baseline, %.1fs",
               i4, i5, i6, wide.f, 100 * wide.f / baseline, wide_time));
    note("48-island preset X = " + vec(wide.x));
    note(fmt("48-island drive gap at delta = 4: %.3e", min_gap(band_diagram(4.0, gap_axis(), drive, kAmplitude, {}, threads))));
    io::json out = io::header("acceptance_n10");
    out["x"] = wide.x;
    out["coefficients"] = io::drive_json(drive);
    out["objective"] = wide.f;
    out["baseline_objective"] = baseline;
    out["history"] = io::history_json(wide.history);
    io::write_json("acceptance_n10_result.json", out);
  }

  report("C7 gap closing at delta = 4", desk.gap < baseline_gap,
         fmt("min folded gap over [4.8, 5.2]: optimized %.3e vs baseline (b1 = 0.66) %.3e", desk.gap, baseline_gap));

  {
    const double b1_only = objective(FourierDrive::monochromatic(0.66), kAmplitude, kDomain);
    const double b3 = desk.result.x.size() > 1 ? desk.result.x[1] : 0.0;
    const double b3_only = objective(FourierDrive({0.0, 0.0, b3}), kAmplitude, kDomain);
    const double limit = 3.0 * desk.result.f;
    report("C8 single-harmonic controls do not suppress", b1_only >= limit && b3_only >= limit,
           fmt("b1 = 0.66 only: %.6f, b3 = %.4f only: %.6f, limit 3 x %.6f = %.6f", b1_only, b3, b3_only,
               desk.result.f, limit));
    const double wide_b3_only = objective(FourierDrive({0.0, 0.0, wide.x[1]}), kAmplitude, kDomain);
    note(fmt("48-island drive %.6f: b1 = 0.66 only is %.2fx, b3 = %.4f only is %.2fx", wide.f, b1_only / wide.f,
             wide.x[1], wide_b3_only / wide.f));
  }

  {
    const unsigned other = threads == 1 ? 2 : std::max(2u, threads / 2);
    const DeskRun again = desk_run(other);
    bool same = again.result.history.size() == desk.result.history.size();
    for (std::size_t g = 0; same && g < desk.result.history.size(); ++g) {
      same = again.result.history[g].best == desk.result.history[g].best &&
             again.result.history[g].x == desk.result.history[g].x;
    }
    same = same && again.result.x == desk.result.x && again.result.f == desk.result.f && again.gap == desk.gap;
    report("C9 determinism across thread counts", same,
           fmt("%u vs %u threads: histories, results and gaps %s", threads, other,
               same ? "bit-identical" : "differ"));
  }

  io::json out = io::header("acceptance_desk");
  out["x"] = desk.result.x;
  out["coefficients"] = io::drive_json(decode(desk.result.x));
  out["objective"] = desk.result.f;
  out["baseline_objective"] = baseline;
  out["min_gap"] = desk.gap;
  out["baseline_min_gap"] = baseline_gap;
  out["history"] = io::history_json(desk.result.history);
  io::write_json("acceptance_desk_result.json", out);

  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
