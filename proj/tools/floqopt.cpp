// floqopt: probability maps, band diagrams, integrated spectra, drive
// optimization and verification suites for the driven two-level system.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "floqopt/floqopt.hpp"
#include "floqopt/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace floqopt;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kVerification = 4 };

// Every parameter is captured as text and resolved after parsing, in the
// order: explicit flag, --config file, preset, built-in default.
class Params {
 public:
  explicit Params(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_, "JSON file of parameters (flags win)");
  }

  void option(const std::string& name, const std::string& fallback, const std::string& help) {
    defaults_[name] = fallback;
    options_[name] = app_->add_option("--" + name, raw_[name], help + " [" + fallback + "]");
  }

  void flag(const std::string& name, const std::string& help) {
    defaults_[name] = "false";
    options_[name] = app_->add_flag("--" + name, flags_[name], help);
  }

  void preset(const std::map<std::string, std::string>& values) {
    for (const auto& [k, v] : values) preset_[k] = v;
  }

  bool given(const std::string& name) const { return options_.at(name)->count() > 0; }

  /// Reads --config; unknown keys are configuration errors.
  void load_config() {
    if (config_path_.empty()) return;
    const json j = io::read_json(config_path_);
    if (!j.is_object()) throw ConfigError(config_path_ + ": top level must be an object");
    for (const auto& [key, value] : j.items()) {
      if (!options_.count(key)) throw ConfigError(config_path_ + ": unknown key '" + key + "'");
      if (value.is_string()) {
        config_[key] = value.get<std::string>();
      } else if (value.is_boolean()) {
        config_[key] = value.get<bool>() ? "true" : "false";
      } else if (value.is_array()) {
        std::string joined;
        for (const auto& item : value) {
          if (!joined.empty()) joined += ',';
          joined += item.is_string() ? item.get<std::string>() : item.dump();
        }
        config_[key] = joined;
      } else if (value.is_number()) {
        config_[key] = value.dump();
      } else {
        throw ConfigError(config_path_ + ": key '" + key + "' has an unsupported type");
      }
    }
  }

  std::string text(const std::string& name) const {
    if (given(name)) return flags_.count(name) ? "true" : raw_.at(name);
    if (auto it = config_.find(name); it != config_.end()) return it->second;
    if (auto it = preset_.find(name); it != preset_.end()) return it->second;
    return defaults_.at(name);
  }

  bool boolean(const std::string& name) const {
    const std::string v = text(name);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("--" + name + ": expected true or false, got '" + v + "'");
  }

  double number(const std::string& name) const { return parse_number(name, text(name)); }

  long integer(const std::string& name) const {
    const double v = number(name);
    if (v != std::floor(v)) throw ConfigError("--" + name + ": expected an integer");
    return static_cast<long>(v);
  }

  std::vector<double> list(const std::string& name) const {
    std::vector<double> out;
    std::stringstream ss(text(name));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(name, item));
    return out;
  }

  std::array<double, 2> range(const std::string& name) const {
    const auto v = list(name);
    if (v.size() != 2 || !(v[0] < v[1])) throw ConfigError("--" + name + ": expected lo,hi with lo < hi");
    return {v[0], v[1]};
  }

  /// "AxB" with both counts positive.
  std::array<std::size_t, 2> grid(const std::string& name) const {
    const std::string v = text(name);
    const auto x = v.find('x');
    if (x == std::string::npos) throw ConfigError("--" + name + ": expected COLSxROWS, got '" + v + "'");
    const double a = parse_number(name, v.substr(0, x));
    const double b = parse_number(name, v.substr(x + 1));
    if (a < 1 || b < 1 || a != std::floor(a) || b != std::floor(b)) {
      throw ConfigError("--" + name + ": counts must be positive integers");
    }
    return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
  }

  /// Resolved parameter set, for sidecars.
  json resolved() const {
    json j = json::object();
    for (const auto& [name, _] : defaults_) j[name] = text(name);
    return j;
  }

 private:
  static double parse_number(const std::string& name, const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("--" + name + ": '" + s + "' is not a finite number");
    }
  }

  CLI::App* app_;
  std::string config_path_;
  std::map<std::string, std::string> raw_;
  std::map<std::string, bool> flags_;
  std::map<std::string, CLI::Option*> options_;
  std::map<std::string, std::string> defaults_;
  std::map<std::string, std::string> preset_;
  std::map<std::string, std::string> config_;
};

std::vector<double> split_numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(what + ": '" + item + "' is not a number");
    }
  }
  return out;
}

/// mono | mono:B1 | triangle:M | coeffs:b1,b2,... | result:PATH
FourierDrive parse_drive(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (kind == "mono") {
      return FourierDrive::monochromatic(arg.empty() ? 1.0 : split_numbers(arg, "--drive").at(0));
    }
    if (kind == "triangle") {
      const auto m = split_numbers(arg, "--drive");
      if (m.size() != 1 || m[0] < 1 || m[0] != std::floor(m[0])) {
        throw ConfigError("--drive triangle:M needs a positive integer M");
      }
      return triangle_drive(static_cast<std::size_t>(m[0]));
    }
    if (kind == "coeffs") return FourierDrive(split_numbers(arg, "--drive"));
    if (kind == "result") {
      const json j = io::read_json(arg);
      if (!j.contains("coefficients")) throw ConfigError(arg + ": no 'coefficients' entry");
      return FourierDrive(j.at("coefficients").get<std::vector<double>>());
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--drive: ") + e.what());
  } catch (const std::out_of_range&) {
    throw ConfigError("--drive: '" + spec + "' is missing a value");
  }
  throw ConfigError("--drive: unknown drive '" + spec +
                    "' (mono, mono:B1, triangle:M, coeffs:..., result:PATH)");
}

unsigned resolve_threads(const Params& p) {
  const std::string v = p.text("threads");
  if (v == "auto") return default_threads();
  const long n = p.integer("threads");
  if (n < 1) throw ConfigError("--threads must be >= 1");
  return static_cast<unsigned>(n);
}

EvalOptions resolve_eval(const Params& p) {
  EvalOptions e;
  const std::string m = p.text("method");
  if (m == "propagator") {
    e.method = Method::propagator;
  } else if (m == "matrix") {
    e.method = Method::matrix;
  } else {
    throw ConfigError("--method: expected propagator or matrix, got '" + m + "'");
  }
  e.steps = static_cast<int>(p.integer("steps"));
  e.n_ph = static_cast<int>(p.integer("nph"));
  if (e.steps < 256) throw ConfigError("--steps must be >= 256");
  if (e.n_ph < 0) throw ConfigError("--nph must be >= 0");
  return e;
}

void common_options(Params& p) {
  p.option("threads", "auto", "worker threads; FLOQOPT_THREADS or all cores when auto");
  p.option("method", "propagator", "probability route: propagator or matrix");
  p.option("steps", "4096", "propagator steps per period");
  p.option("nph", "0", "matrix photon cutoff, 0 for the automatic policy");
  p.option("out", ".", "output directory");
}

void map_options(Params& p) {
  p.option("drive", "mono", "drive: mono, mono:B1, triangle:M, coeffs:b1,b2,..., result:PATH");
  p.option("amplitude", "6", "drive amplitude A");
  p.option("grid", "201x201", "eps0 x delta point counts");
  p.option("eps0-range", "0,10", "eps0 axis lo,hi");
  p.option("delta-range", "0,10", "delta axis lo,hi");
}

Grid2D resolve_grid(const Params& p) {
  const auto g = p.grid("grid");
  const auto e = p.range("eps0-range");
  const auto d = p.range("delta-range");
  if (g[0] < 2 || g[1] < 2) throw ConfigError("--grid needs at least 2 points per axis");
  return Grid2D::uniform(e[0], e[1], g[0], d[0], d[1], g[1]);
}

double resolve_amplitude(const Params& p) {
  const double a = p.number("amplitude");
  if (a < 0.0) throw ConfigError("--amplitude must be >= 0");
  return a;
}

json sidecar(const std::string& kind, const std::string& command, const Params& p) {
  json j = io::header(kind);
  j["command"] = command;
  j["parameters"] = p.resolved();
  return j;
}

void write_csv(const fs::path& path, const std::function<void(std::ostream&)>& body, json meta) {
  auto out = io::open_output(path);
  body(out);
  if (!out) throw ConfigError("failed writing " + path.string());
  meta["file"] = path.filename().string();
  io::write_json(io::sidecar_path(path), meta);
}

int run_scan(const Params& p) {
  const FourierDrive drive = parse_drive(p.text("drive"));
  const Grid2D grid = resolve_grid(p);
  const EvalOptions eval = resolve_eval(p);
  const auto map = probability_map(grid, drive, resolve_amplitude(p), eval, resolve_threads(p));
  const fs::path out = fs::path(p.text("out")) / "map.csv";
  json meta = sidecar("probability_map", "scan", p);
  meta.update(io::map_metadata(map));
  write_csv(out, [&](std::ostream& os) { io::write_map_csv(os, map); }, meta);
  std::cout << "wrote " << out.string() << " (" << map.values.size() << " points)\n";
  return kOk;
}

int run_bands(const Params& p) {
  const FourierDrive drive = parse_drive(p.text("drive"));
  const FourierDrive baseline = parse_drive(p.text("baseline"));
  const double amplitude = resolve_amplitude(p);
  const double delta = p.number("delta");
  const auto range = p.range("eps0-range");
  const long points = p.integer("eps0-points");
  if (points < 2) throw ConfigError("--eps0-points must be >= 2");
  const auto window = p.range("gap-window");
  const EvalOptions eval = resolve_eval(p);
  const unsigned threads = resolve_threads(p);

  const auto axis = linspace(range[0], range[1], static_cast<std::size_t>(points));
  const auto rows = band_diagram(delta, axis, drive, amplitude, eval, threads);
  // the gap is resolved on its own fine axis over the window
  const auto gap_axis = linspace(window[0], window[1], static_cast<std::size_t>(p.integer("gap-points")));
  const double gap = min_gap(band_diagram(delta, gap_axis, drive, amplitude, eval, threads));
  const double base_gap = min_gap(band_diagram(delta, gap_axis, baseline, amplitude, eval, threads));

  const fs::path dir = p.text("out");
  json meta = sidecar("band_diagram", "bands", p);
  meta["drive"] = io::drive_json(drive);
  meta["evaluation"] = io::eval_json(eval);
  write_csv(dir / "bands.csv", [&](std::ostream& os) { io::write_bands_csv(os, rows); }, meta);

  json summary = sidecar("band_summary", "bands", p);
  summary["drive"] = io::drive_json(drive);
  summary["baseline_drive"] = io::drive_json(baseline);
  summary["gap_window"] = window;
  summary["min_gap"] = gap;
  summary["baseline_min_gap"] = base_gap;
  summary["gap_smaller_than_baseline"] = gap < base_gap;
  io::write_json(dir / "summary.json", summary);
  std::printf("min gap %.6g (baseline %.6g) over eps0 in [%g, %g]\n", gap, base_gap, window[0],
              window[1]);
  return kOk;
}

int run_spectrum(const Params& p) {
  const fs::path dir = p.text("out");
  json meta = sidecar("integrated_spectrum", "spectrum", p);
  std::optional<ProbabilityMap> map;
  if (!p.text("map").empty()) {
    std::ifstream in(p.text("map"));
    if (!in) throw ConfigError("--map: cannot open " + p.text("map"));
    map = io::read_map_csv(in);
    meta["source_map"] = p.text("map");
  } else {
    const FourierDrive drive = parse_drive(p.text("drive"));
    const EvalOptions eval = resolve_eval(p);
    map = probability_map(resolve_grid(p), drive, resolve_amplitude(p), eval, resolve_threads(p));
    meta["drive"] = io::drive_json(drive);
    meta["evaluation"] = io::eval_json(eval);
  }
  const auto rows = integrated_spectrum(*map);
  write_csv(dir / "spectrum.csv", [&](std::ostream& os) { io::write_spectrum_csv(os, rows); }, meta);
  std::cout << "wrote " << (dir / "spectrum.csv").string() << " (" << rows.size() << " rows)\n";
  return kOk;
}

int run_optimize(const Params& p) {
  const long variables = p.integer("variables");
  if (variables < 1) throw ConfigError("--variables must be >= 1");
  const auto b1 = p.list("b1-range");
  if (b1.size() != 2) throw ConfigError("--b1-range: expected lo,hi");
  const Bounds bounds = Bounds::alternating(static_cast<std::size_t>(variables), b1[0], b1[1],
                                            p.number("magnitude"));
  IslandConfig config;
  config.islands = static_cast<std::size_t>(std::max(0L, p.integer("islands")));
  config.population = static_cast<std::size_t>(std::max(0L, p.integer("population")));
  config.generations = static_cast<int>(p.integer("generations"));
  config.de.F = p.number("F");
  config.de.CR = p.number("CR");
  config.migration_interval = static_cast<int>(p.integer("migration-interval"));
  const long seed = p.integer("seed");
  if (seed < 0) throw ConfigError("--seed must be >= 0");
  config.seed = static_cast<std::uint64_t>(seed);
  config.threads = resolve_threads(p);
  config.validate();

  ObjectiveDomain domain;
  domain.eps0_range = p.range("domain-eps0");
  domain.delta_range = p.range("domain-delta");
  const auto q = p.grid("quadrature");
  domain.eps0_points = q[0];
  domain.delta_points = q[1];
  domain.validate();
  const double amplitude = resolve_amplitude(p);
  const EvalOptions eval = resolve_eval(p);

  const fs::path dir = p.text("out");
  json manifest = sidecar("optimizer_manifest", "optimize", p);
  manifest["config"] = io::island_json(config);
  manifest["bounds"] = io::bounds_json(bounds);
  manifest["domain"] = io::domain_json(domain);
  manifest["amplitude"] = amplitude;
  manifest["evaluation"] = io::eval_json(eval);
  io::write_json(dir / "manifest.json", manifest);

  const DecisionVector base_x(1, bounds.lo[0]);
  const double baseline = objective(decode(base_x), amplitude, domain, eval, config.threads);
  std::printf("baseline objective (b1 = %g only): %.10g\n", bounds.lo[0], baseline);

  const auto result = optimize(config, domain, amplitude, bounds, eval, [](const HistoryEntry& e) {
    std::fprintf(stderr, "generation %d best %.10g\n", e.generation, e.best);
  });

  manifest["history"] = io::history_json(result.history);
  io::write_json(dir / "manifest.json", manifest);
  json history = io::header("optimizer_history");
  history["history"] = io::history_json(result.history);
  io::write_json(dir / "history.json", history);

  const FourierDrive best = decode(result.x);
  json res = io::header("optimizer_result");
  res["x"] = result.x;
  res["coefficients"] = io::drive_json(best);
  res["objective"] = result.f;
  res["baseline_objective"] = baseline;
  res["baseline_drive"] = io::drive_json(decode(base_x));
  res["ratio"] = result.f / baseline;
  res["amplitude"] = amplitude;
  res["evaluations"] = result.evaluations;
  res["cache_hits"] = result.cache_hits;
  res["wall_seconds"] = result.seconds;
  res["threads"] = config.threads;
  io::write_json(dir / "result.json", res);
  std::printf("best objective %.10g (%.1f%% of baseline), wrote %s\n", result.f,
              100.0 * result.f / baseline, (dir / "result.json").string().c_str());
  return kOk;
}

json deviation_json(double value, double tolerance) {
  return {{"max", value}, {"tolerance", tolerance}, {"pass", value <= tolerance}};
}

int run_verify(const Params& p) {
  const unsigned threads = resolve_threads(p);
  const bool analytic = p.boolean("analytic");
  const bool null = p.boolean("null");
  json report = sidecar("verification_report", "verify", p);
  bool pass = true;

  if (analytic) {
    const double tol = 0.02;
    double worst = 0.0;
    json rows = json::array();
    for (const auto& r : verify::analytic_limit(p.number("delta"), p.number("amplitude"))) {
      worst = std::max(worst, r.relative);
      rows.push_back({{"k", r.k}, {"floquet", r.floquet}, {"analytic", r.analytic},
                      {"relative_deviation", r.relative}});
      std::printf("k=%d floquet %.8f analytic %.8f rel %.2e\n", r.k, r.floquet, r.analytic, r.relative);
    }
    report["analytic"] = {{"rows", rows}, {"relative_deviation", deviation_json(worst, tol)}};
    pass = pass && worst <= tol;
  } else if (null) {
    const double tol = 1e-12;
    double worst = 0.0;
    json rows = json::array();
    for (const auto& r : verify::null_cases()) {
      worst = std::max({worst, std::abs(r.floquet), std::abs(r.modes), std::abs(r.oracle)});
      rows.push_back({{"case", r.name}, {"matrix", r.floquet}, {"propagator", r.modes}, {"oracle", r.oracle}});
      std::printf("%-26s matrix %.3g propagator %.3g oracle %.3g\n", r.name.c_str(), r.floquet,
                  r.modes, r.oracle);
    }
    report["null"] = {{"rows", rows}, {"value", deviation_json(worst, tol)}};
    pass = pass && worst <= tol;
  } else {
    verify::PointSpec spec;
    spec.seed = static_cast<std::uint64_t>(p.integer("seed"));
    spec.count = static_cast<std::size_t>(p.integer("points"));
    oracle::AverageOptions avg;
    avg.periods = static_cast<int>(p.integer("periods"));
    avg.phase_samples = static_cast<int>(p.integer("phases"));
    spec.min_splitting = std::max(1e-3, 4.0 / avg.periods);
    const auto rep = verify::equivalence(spec, avg, true, threads);
    json rows = json::array();
    for (const auto& r : rep.rows) {
      rows.push_back({{"eps0", r.point.p.eps0}, {"delta", r.point.p.delta},
                      {"amplitude", r.point.p.amplitude}, {"drive", r.point.drive_name},
                      {"quasi_energy_mismatch", r.q_mismatch}, {"floquet", r.p_floquet},
                      {"oracle", r.p_oracle}});
    }
    report["equivalence"] = {{"rows", rows},
                             {"skipped_near_degenerate", rep.skipped},
                             {"quasi_energy", deviation_json(rep.max_q_mismatch, 1e-8)},
                             {"probability", deviation_json(rep.max_p_deviation, 1e-3)}};
    std::printf("max quasi-energy mismatch %.2e (tol 1e-8), max probability deviation %.2e (tol 1e-3)\n",
                rep.max_q_mismatch, rep.max_p_deviation);
    pass = rep.max_q_mismatch <= 1e-8 && rep.max_p_deviation <= 1e-3;
  }
  report["pass"] = pass;
  const fs::path out = fs::path(p.text("out")) / "verify.json";
  io::write_json(out, report);
  std::printf("%s\n", pass ? "PASS" : "FAIL");
  return pass ? kOk : kVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet transition probabilities and drive-shape optimization for a driven two-level system"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* scan = app.add_subcommand("scan", "probability map over (eps0, delta)");
  Params scan_p(scan);
  common_options(scan_p);
  map_options(scan_p);
  scan_p.flag("paper-fig1a", "monochromatic drive, A = 6, 201x201 over [0,10]^2");
  scan_p.flag("paper-fig1b", "triangle drive with 15 harmonics, A = 6, 201x201 over [0,10]^2");

  auto* bands = app.add_subcommand("bands", "folded quasi-energies against eps0 at fixed delta");
  Params bands_p(bands);
  common_options(bands_p);
  bands_p.option("drive", "mono", "drive spec");
  bands_p.option("baseline", "mono:0.66", "reference drive for the gap comparison");
  bands_p.option("amplitude", "9", "drive amplitude A");
  bands_p.option("delta", "4", "tunnelling amplitude");
  bands_p.option("eps0-range", "3,7", "eps0 axis lo,hi");
  bands_p.option("eps0-points", "401", "eps0 axis points");
  bands_p.option("gap-window", "4.8,5.2", "eps0 window for the minimum gap");
  bands_p.option("gap-points", "401", "eps0 points inside the gap window");

  auto* spectrum = app.add_subcommand("spectrum", "probability integrated over delta");
  Params spectrum_p(spectrum);
  common_options(spectrum_p);
  map_options(spectrum_p);
  spectrum_p.option("map", "", "existing map CSV; otherwise a map is computed");

  auto* optimize_cmd = app.add_subcommand("optimize", "island-model differential evolution");
  Params opt_p(optimize_cmd);
  common_options(opt_p);
  opt_p.option("variables", "5", "odd harmonics N (b_{2n-1} = X_n)");
  opt_p.option("amplitude", "9", "drive amplitude A");
  opt_p.option("islands", "4", "island count");
  opt_p.option("population", "16", "population per island");
  opt_p.option("generations", "30", "generations");
  opt_p.option("F", "0.8", "differential weight");
  opt_p.option("CR", "0.9", "crossover rate");
  opt_p.option("migration-interval", "1", "generations between ring migrations");
  opt_p.option("seed", "20240601", "master seed");
  opt_p.option("b1-range", "0.66,1.0", "bounds of X_1");
  opt_p.option("magnitude", "1", "bound on |X_n| for n >= 2");
  opt_p.option("domain-eps0", "4.8,5.2", "objective domain eps0 lo,hi");
  opt_p.option("domain-delta", "0,10", "objective domain delta lo,hi");
  opt_p.option("quadrature", "9x101", "objective quadrature points eps0 x delta");
  opt_p.flag("paper-fig2", "N = 10, A = 9, 48 islands x 10 x 20 generations");
  opt_p.flag("desk", "N = 5, A = 9, 4 islands x 16 x 30 generations, seed 20240601");

  auto* verify_cmd = app.add_subcommand("verify", "cross-checks against the oracle and the analytic limit");
  Params ver_p(verify_cmd);
  ver_p.option("threads", "auto", "worker threads");
  ver_p.option("out", ".", "output directory");
  ver_p.option("seed", "20240601", "seed of the random point set");
  ver_p.option("points", "20", "random points");
  ver_p.option("phases", "64", "oracle drive-phase samples");
  ver_p.option("periods", "200", "oracle averaging periods");
  ver_p.option("delta", "0.05", "tunnelling amplitude for --analytic");
  ver_p.option("amplitude", "6", "drive amplitude for --analytic");
  ver_p.flag("analytic", "weak-tunnelling limit at the resonance centres");
  ver_p.flag("null", "A = 0 and delta = 0 cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (scan->parsed()) {
      scan_p.load_config();
      const bool a = scan_p.boolean("paper-fig1a");
      const bool b = scan_p.boolean("paper-fig1b");
      if (a && b) throw ConfigError("--paper-fig1a and --paper-fig1b are exclusive");
      const std::map<std::string, std::string> grid = {
          {"amplitude", "6"}, {"grid", "201x201"}, {"eps0-range", "0,10"}, {"delta-range", "0,10"}};
      if (a) scan_p.preset(grid), scan_p.preset({{"drive", "mono"}});
      if (b) scan_p.preset(grid), scan_p.preset({{"drive", "triangle:15"}});
      return run_scan(scan_p);
    }
    if (bands->parsed()) {
      bands_p.load_config();
      return run_bands(bands_p);
    }
    if (spectrum->parsed()) {
      spectrum_p.load_config();
      return run_spectrum(spectrum_p);
    }
    if (optimize_cmd->parsed()) {
      opt_p.load_config();
      const bool fig2 = opt_p.boolean("paper-fig2");
      const bool desk = opt_p.boolean("desk");
      if (fig2 && desk) throw ConfigError("--paper-fig2 and --desk are exclusive");
      const std::map<std::string, std::string> domain = {
          {"amplitude", "9"}, {"domain-eps0", "4.8,5.2"}, {"domain-delta", "0,10"},
          {"quadrature", "9x101"}, {"b1-range", "0.66,1.0"}, {"magnitude", "1"},
          {"F", "0.8"}, {"CR", "0.9"}, {"migration-interval", "1"}, {"seed", "20240601"}};
      if (fig2) {
        opt_p.preset(domain);
        opt_p.preset({{"variables", "10"}, {"islands", "48"}, {"population", "10"}, {"generations", "20"}});
      }
      if (desk) {
        opt_p.preset(domain);
        opt_p.preset({{"variables", "5"}, {"islands", "4"}, {"population", "16"}, {"generations", "30"}});
      }
      return run_optimize(opt_p);
    }
    if (verify_cmd->parsed()) {
      ver_p.load_config();
      if (ver_p.boolean("analytic") && ver_p.boolean("null")) {
        throw ConfigError("--analytic and --null are exclusive");
      }
      return run_verify(ver_p);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
