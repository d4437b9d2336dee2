#include <catch_amalgamated.hpp>

#include <sstream>

#include "floqopt/io.hpp"

using namespace floqopt;

TEST_CASE("map CSV round trip") {
  const auto grid = Grid2D::uniform(0.0, 1.0, 3, 0.5, 1.5, 2);
  ProbabilityMap map{grid, {0.1, 0.2, 1.0 / 3.0, 0.4, 0.5, 0.6}, FourierDrive::monochromatic(), 6.0};
  std::stringstream ss;
  io::write_map_csv(ss, map);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "eps0,delta,probability");
  std::string row;
  std::getline(ss, row);
  CHECK(row == "0,0.5,0.10000000000000001");
  ss.seekg(0);
  const auto back = io::read_map_csv(ss);
  CHECK(back.values == map.values);
  CHECK(back.grid.eps0_axis() == grid.eps0_axis());
  CHECK(back.grid.delta_axis() == grid.delta_axis());
}

TEST_CASE("map CSV rejects malformed input") {
  std::stringstream bad_header("eps0,delta\n");
  CHECK_THROWS_AS(io::read_map_csv(bad_header), ConfigError);
  std::stringstream bad_number("eps0,delta,probability\n0,0,x\n");
  CHECK_THROWS_AS(io::read_map_csv(bad_number), ConfigError);
  std::stringstream ragged("eps0,delta,probability\n0,0,0\n1,0,0\n0,1,0\n");
  CHECK_THROWS_AS(io::read_map_csv(ragged), ConfigError);
}

TEST_CASE("band and spectrum tables") {
  std::stringstream bands;
  io::write_bands_csv(bands, {{4.0, {-0.25, 0.125}}});
  CHECK(bands.str() == "eps0,q1,q2\n4,-0.25,0.125\n");
  std::stringstream spec;
  io::write_spectrum_csv(spec, {{5.0, 2.5}});
  CHECK(spec.str() == "eps0,integrated_probability\n5,2.5\n");
}

TEST_CASE("json documents") {
  const auto h = io::header("probability_map");
  CHECK(h.at("schema_version") == kSchemaVersion);
  CHECK(h.at("version") == std::string(kVersion));
  const ProbabilityMap map{Grid2D::uniform(0, 10, 201, 0, 10, 201), {}, triangle_drive(3), 6.0};
  const auto meta = io::map_metadata(map);
  CHECK(meta.at("amplitude") == 6.0);
  CHECK(meta.at("drive").size() == 3);
  CHECK(meta.at("grid").at("eps0").at("points") == 201);
  CHECK(meta.at("evaluation").at("method") == "propagator");
  CHECK(io::sidecar_path("out/map.csv") == "out/map.csv.json");
  const auto hist = io::history_json({{0, 1.5, {0.7}}, {1, 1.25, {0.8}}});
  CHECK(hist.size() == 2);
  CHECK(hist[1].at("best") == 1.25);
  CHECK(io::number(0.1) == "0.10000000000000001");
}
