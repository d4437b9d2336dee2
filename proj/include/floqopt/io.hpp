#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "floqopt/errors.hpp"
#include "floqopt/optimizer.hpp"
#include "floqopt/scan.hpp"
#include "floqopt/version.hpp"

// CSV tables and JSON sidecars. Numbers are written with %.17g so they
// round-trip exactly.
namespace floqopt::io {

using json = nlohmann::json;

inline std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  return out;
}

inline void write_map_csv(std::ostream& out, const ProbabilityMap& map) {
  out << "eps0,delta,probability\n";
  for (std::size_t i = 0; i < map.grid.rows(); ++i) {
    for (std::size_t j = 0; j < map.grid.cols(); ++j) {
      out << number(map.grid.eps0_axis()[j]) << ',' << number(map.grid.delta_axis()[i]) << ','
          << number(map.value(i, j)) << '\n';
    }
  }
}

inline void write_bands_csv(std::ostream& out, const std::vector<BandRow>& rows) {
  out << "eps0,q1,q2\n";
  for (const auto& r : rows) {
    out << number(r.eps0) << ',' << number(r.q[0]) << ',' << number(r.q[1]) << '\n';
  }
}

inline void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumRow>& rows) {
  out << "eps0,integrated_probability\n";
  for (const auto& r : rows) out << number(r.eps0) << ',' << number(r.integrated) << '\n';
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

inline double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": '" + s + "' is not a number");
  }
}

}  // namespace detail

/// Reads a map written by write_map_csv. The drive metadata is not part of
/// the CSV and is left at its default.
inline ProbabilityMap read_map_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "eps0,delta,probability") {
    throw ConfigError("map CSV must start with the header eps0,delta,probability");
  }
  std::vector<std::array<double, 3>> rows;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto cells = detail::split(line);
    if (cells.size() != 3) throw ConfigError("line " + std::to_string(n) + ": expected 3 columns");
    rows.push_back({detail::parse_double(cells[0], n), detail::parse_double(cells[1], n),
                    detail::parse_double(cells[2], n)});
  }
  std::vector<double> eps0, delta;
  for (const auto& r : rows) {
    if (delta.empty() || r[1] != delta.back()) delta.push_back(r[1]);
    if (delta.size() == 1) eps0.push_back(r[0]);
  }
  if (rows.size() != eps0.size() * delta.size()) {
    throw ConfigError("map CSV rows do not form a full grid in row-major order");
  }
  std::vector<double> values(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k][0] != eps0[k % eps0.size()] || rows[k][1] != delta[k / eps0.size()]) {
      throw ConfigError("map CSV row " + std::to_string(k + 2) + " is out of grid order");
    }
    values[k] = rows[k][2];
  }
  return {Grid2D(std::move(eps0), std::move(delta)), std::move(values), FourierDrive{}, 0.0, {}};
}

inline json drive_json(const FourierDrive& drive) {
  return json(std::vector<double>(drive.coefficients().begin(), drive.coefficients().end()));
}

inline json axis_json(const std::vector<double>& axis) {
  return {{"lo", axis.front()}, {"hi", axis.back()}, {"points", axis.size()}};
}

inline json domain_json(const ObjectiveDomain& d) {
  return {{"eps0_range", d.eps0_range},
          {"delta_range", d.delta_range},
          {"eps0_points", d.eps0_points},
          {"delta_points", d.delta_points}};
}

inline json bounds_json(const Bounds& b) { return {{"lo", b.lo}, {"hi", b.hi}}; }

inline json island_json(const IslandConfig& c) {
  return {{"islands", c.islands},       {"population", c.population},
          {"generations", c.generations}, {"F", c.de.F},
          {"CR", c.de.CR},               {"migration_interval", c.migration_interval},
          {"topology", "ring"},           {"seed", c.seed}};
}

inline json eval_json(const EvalOptions& e) {
  json j = {{"method", method_name(e.method)}};
  if (e.method == Method::propagator) {
    j["steps"] = e.steps;
  } else {
    j["n_ph"] = e.n_ph;
    if (e.n_ph == 0) j["n_ph_policy"] = "ceil(A*max|g|) + ceil(|eps0|) + 16 + 2M, min 32, per point";
  }
  return j;
}

/// Common header for every JSON document the tools write.
inline json header(const std::string& kind) {
  return {{"schema_version", kSchemaVersion}, {"artifact", "floqopt"}, {"version", kVersion},
          {"kind", kind}};
}

inline json map_metadata(const ProbabilityMap& map) {
  json j = header("probability_map");
  j["drive"] = drive_json(map.drive);
  j["amplitude"] = map.amplitude;
  j["evaluation"] = eval_json(map.eval);
  j["grid"] = {{"eps0", axis_json(map.grid.eps0_axis())}, {"delta", axis_json(map.grid.delta_axis())}};
  return j;
}

inline json history_json(const std::vector<HistoryEntry>& history) {
  json h = json::array();
  for (const auto& e : history) h.push_back({{"generation", e.generation}, {"best", e.best}, {"x", e.x}});
  return h;
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

/// Sidecar path for an output file: data.csv -> data.csv.json.
inline std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return path.string() + ".json";
}

}  // namespace floqopt::io
