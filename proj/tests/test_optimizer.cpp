#include <catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include "floqopt/optimizer.hpp"

using namespace floqopt;

namespace {

double sphere(const DecisionVector& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

Population make_population(std::vector<DecisionVector> xs, const std::function<double(const DecisionVector&)>& f) {
  Population pop;
  for (auto& x : xs) pop.members.push_back({x, f(x)});
  return pop;
}

BatchObjective batch(const std::function<double(const DecisionVector&)>& f) {
  return [f](const std::vector<DecisionVector>& xs) {
    std::vector<double> out;
    for (const auto& x : xs) out.push_back(f(x));
    return out;
  };
}

}  // namespace

TEST_CASE("decode") {
  CHECK(decode({1.0}).coefficients()[0] == 1.0);
  CHECK(decode({1.0, -1.0 / 9, 1.0 / 25}) == triangle_drive(5));
  const auto d = decode({0.66, -0.518});
  CHECK(d.harmonics() == 3);
  CHECK(d.b(1) == 0.66);
  CHECK(d.b(2) == 0.0);
  CHECK(d.b(3) == -0.518);

  const Bounds b = Bounds::alternating(3);
  CHECK_NOTHROW(decode({0.66, -0.518, 0.0}, b));
  CHECK_THROWS_AS(decode({0.5, -0.518, 0.0}, b), ConfigError);
  CHECK_THROWS_AS(decode({0.7, 0.1, 0.0}, b), ConfigError);
  CHECK_THROWS_AS(decode({0.7, -0.1}, b), ConfigError);
  CHECK(encode(decode({0.7, -0.2, 0.1})) == DecisionVector{0.7, -0.2, 0.1});
}

TEST_CASE("alternating bounds") {
  const Bounds b = Bounds::alternating(4);
  CHECK(b.lo == std::vector<double>{0.66, -1.0, 0.0, -1.0});
  CHECK(b.hi == std::vector<double>{1.0, 0.0, 1.0, 0.0});
  DecisionVector x{2.0, 0.5, -0.5, -2.0};
  b.clip(x);
  CHECK(x == DecisionVector{1.0, 0.0, 0.0, -1.0});
  CHECK_THROWS_AS(Bounds::alternating(0), ConfigError);
  CHECK_THROWS_AS((Bounds{{1.0}, {0.0}}.validate()), ConfigError);
}

TEST_CASE("decoded drives keep the sign pattern") {
  Rng rng(9);
  const Bounds b = Bounds::alternating(6);
  for (int i = 0; i < 100; ++i) {
    DecisionVector x(6);
    for (std::size_t k = 0; k < 6; ++k) x[k] = b.lo[k] + (b.hi[k] - b.lo[k]) * rng.uniform();
    const auto d = decode(x, b);
    for (std::size_t n = 2; n <= d.harmonics(); n += 2) CHECK(d.b(n) == 0.0);
    for (std::size_t n = 1; n <= d.harmonics(); n += 2) {
      const double sign = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
      CHECK(sign * d.b(n) >= 0.0);
    }
  }
}

TEST_CASE("rng streams") {
  Rng a(1), b(1), c(2);
  CHECK(a.next() == b.next());
  CHECK(a.next() != c.next());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(a.below(7) < 7);
  }
  CHECK(mix_seed(5, 0) != mix_seed(5, 1));
  CHECK(mix_seed(5, 0) != mix_seed(6, 0));
}

TEST_CASE("identical population is a fixed point") {
  const Bounds b{{-1, -1}, {1, 1}};
  auto pop = make_population(std::vector<DecisionVector>(6, {0.3, -0.2}), sphere);
  Rng rng(3);
  const auto next = de_generation(pop, b, {}, rng, batch(sphere));
  for (const auto& m : next.members) CHECK(m.x == DecisionVector{0.3, -0.2});
  CHECK(next.generation == 1);
}

TEST_CASE("F = 0 and CR = 1 copy a partner") {
  const Bounds b{{-10, -10}, {10, 10}};
  std::vector<DecisionVector> xs;
  for (int i = 0; i < 7; ++i) xs.push_back({static_cast<double>(i), -static_cast<double>(i)});
  const auto pop = make_population(xs, sphere);
  Rng rng(4);
  const auto trials = make_trials(pop, b, {0.0, 1.0}, rng);
  for (std::size_t i = 0; i < trials.size(); ++i) {
    CHECK(trials[i] != pop.members[i].x);
    bool found = false;
    for (const auto& m : pop.members) found = found || m.x == trials[i];
    CHECK(found);
  }
  Rng rng2(4);
  const auto next = de_generation(pop, b, {0.0, 1.0}, rng2, batch(sphere));
  for (std::size_t i = 0; i < pop.size(); ++i) {
    CHECK(next.members[i].f == std::min(pop.members[i].f, sphere(trials[i])));
  }
}

TEST_CASE("trials stay in bounds") {
  const Bounds b = Bounds::alternating(5);
  Rng init(8);
  std::vector<DecisionVector> xs;
  for (int i = 0; i < 10; ++i) {
    DecisionVector x(5);
    for (std::size_t k = 0; k < 5; ++k) x[k] = b.lo[k] + (b.hi[k] - b.lo[k]) * init.uniform();
    xs.push_back(x);
  }
  auto pop = make_population(xs, sphere);
  Rng rng(6);
  for (int g = 0; g < 20; ++g) {
    for (const auto& t : make_trials(pop, b, {1.9, 0.9}, rng)) CHECK(b.contains(t));
    pop = de_generation(pop, b, {1.9, 0.9}, rng, batch(sphere));
  }
  CHECK_THROWS_AS(make_trials(make_population(std::vector<DecisionVector>(4, {0.7, -0.1, 0, 0, 0}), sphere),
                              b, {}, rng),
                  ConfigError);
}

TEST_CASE("sphere benchmark") {
  IslandConfig c;
  c.islands = 1;
  c.population = 20;
  c.generations = 50;
  c.threads = 1;
  const auto r = optimize(c, Bounds{{-5, -5}, {5, 5}}, sphere);
  CHECK(r.f <= 1e-3);
  REQUIRE(r.history.size() == 51);
  for (std::size_t g = 1; g < r.history.size(); ++g) CHECK(r.history[g].best <= r.history[g - 1].best);
}

TEST_CASE("migration") {
  Rng rng(1);
  std::vector<Population> one(1);
  one[0] = make_population({{1}, {2}, {3}}, sphere);
  const auto before = one[0].members;
  migrate(one, rng);
  CHECK(one[0].members.size() == before.size());

  auto value = [](const DecisionVector& x) { return x[0]; };
  std::vector<Population> two = {make_population({{0.1}, {0.5}, {0.7}, {0.95}, {0.99}}, value),
                                 make_population({{0.9}, {0.92}, {0.93}, {0.94}, {0.97}}, value)};
  migrate(two, rng);
  bool has = false;
  for (const auto& m : two[1].members) has = has || m.f == 0.1;
  CHECK(has);
  CHECK(two[0].members.size() == 5);
  CHECK(two[1].members.size() == 5);
  CHECK(two[0].best().f == 0.1);
  CHECK(two[1].best().f == 0.1);

  // a worse migrant never replaces anything
  std::vector<Population> ring = {make_population({{0.5}, {0.6}, {0.7}, {0.8}, {0.9}}, value),
                                  make_population({{0.1}, {0.2}, {0.3}, {0.4}, {0.45}}, value)};
  const auto second = ring[1].members;
  migrate(ring, rng);
  for (std::size_t i = 0; i < second.size(); ++i) CHECK(ring[1].members[i].f == second[i].f);
}

TEST_CASE("config validation") {
  IslandConfig c;
  CHECK_NOTHROW(c.validate());
  c.population = 4;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.islands = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.de.F = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.de.CR = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("determinism across thread counts") {
  const Bounds b = Bounds::alternating(3);
  auto rugged = [](const DecisionVector& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::sin(7.0 * x[i] * (i + 1)) + x[i] * x[i];
    return s;
  };
  IslandConfig c;
  c.islands = 5;
  c.population = 8;
  c.generations = 12;
  c.threads = 1;
  const auto a = optimize(c, b, rugged);
  c.threads = 4;
  const auto d = optimize(c, b, rugged);
  REQUIRE(a.history.size() == d.history.size());
  for (std::size_t g = 0; g < a.history.size(); ++g) {
    CHECK(a.history[g].best == d.history[g].best);
    CHECK(a.history[g].x == d.history[g].x);
  }
  CHECK(a.x == d.x);
  for (std::size_t g = 1; g < a.history.size(); ++g) CHECK(a.history[g].best <= a.history[g - 1].best);
  for (const auto& island : a.islands) {
    for (const auto& m : island.members) CHECK(b.contains(m.x));
  }

  c.generations = 0;
  const auto z1 = optimize(c, b, rugged);
  const auto z2 = optimize(c, b, rugged);
  CHECK(z1.history.size() == 1);
  CHECK(z1.x == z2.x);
  CHECK(z1.f == a.history[0].best);
}

TEST_CASE("real objective is deterministic across thread counts") {
  ObjectiveDomain d;
  d.eps0_points = 3;
  d.delta_points = 5;
  IslandConfig c;
  c.islands = 2;
  c.population = 5;
  c.generations = 2;
  c.threads = 1;
  const Bounds b = Bounds::alternating(3);
  const auto a = optimize(c, d, 9.0, b);
  c.threads = 3;
  const auto e = optimize(c, d, 9.0, b);
  CHECK(a.x == e.x);
  CHECK(a.f == e.f);
}

TEST_CASE("objective failures name the vector") {
  IslandConfig c;
  c.islands = 1;
  c.population = 5;
  c.generations = 1;
  try {
    optimize(c, Bounds{{0.0}, {1.0}}, [](const DecisionVector&) -> double { throw NumericalError("boom"); });
    FAIL("no exception");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("X = [") != std::string::npos);
  }
}

TEST_CASE("objective cache") {
  IslandConfig c;
  c.islands = 1;
  c.population = 6;
  c.generations = 5;
  c.threads = 1;
  // a degenerate box makes every vector identical
  const auto r = optimize(c, Bounds{{0.5, 0.5}, {0.5, 0.5}}, sphere);
  CHECK(r.evaluations == 1);
  CHECK(r.cache_hits == 6 * 6 - 1);
}
