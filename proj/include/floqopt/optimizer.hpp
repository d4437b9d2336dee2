#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "floqopt/drive.hpp"
#include "floqopt/errors.hpp"
#include "floqopt/parallel.hpp"
#include "floqopt/scan.hpp"

namespace floqopt {

/// X_1..X_N with b_{2n-1} = X_n.
using DecisionVector = std::vector<double>;

/// Per-variable box. The default layout pins the sign of every harmonic:
/// X_1 in [b1_lo, b1_hi] and X_n in (-1)^(n-1) * [0, magnitude] after that.
struct Bounds {
  std::vector<double> lo;
  std::vector<double> hi;

  static Bounds alternating(std::size_t variables, double b1_lo = 0.66, double b1_hi = 1.0,
                            double magnitude = 1.0) {
    if (variables < 1) throw ConfigError("bounds need at least one variable");
    Bounds b{{b1_lo}, {b1_hi}};
    for (std::size_t n = 2; n <= variables; ++n) {
      if (n % 2 == 0) {
        b.lo.push_back(-magnitude);
        b.hi.push_back(0.0);
      } else {
        b.lo.push_back(0.0);
        b.hi.push_back(magnitude);
      }
    }
    b.validate();
    return b;
  }

  std::size_t size() const { return lo.size(); }

  void validate() const {
    if (lo.empty() || lo.size() != hi.size()) throw ConfigError("bounds lo/hi length mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || lo[i] > hi[i]) {
        throw ConfigError("bounds for X_" + std::to_string(i + 1) + " need finite lo <= hi");
      }
    }
  }

  bool contains(const DecisionVector& x) const {
    if (x.size() != size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
    }
    return true;
  }

  void clip(DecisionVector& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
  }
};

/// b_{2n-1} = X_n with all even harmonics zero; length 2N - 1.
inline FourierDrive decode(const DecisionVector& x) {
  if (x.empty()) throw ConfigError("decision vector is empty");
  std::vector<double> b(2 * x.size() - 1, 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) b[2 * n] = x[n];
  return FourierDrive(std::move(b));
}

inline FourierDrive decode(const DecisionVector& x, const Bounds& bounds) {
  if (!bounds.contains(x)) throw ConfigError("decision vector lies outside its bounds");
  return decode(x);
}

/// Inverse of decode for drives with no even harmonics.
inline DecisionVector encode(const FourierDrive& drive) {
  if (!drive.odd_only()) throw ConfigError("drive has even harmonics and cannot be encoded");
  DecisionVector x;
  for (std::size_t n = 1; n <= drive.harmonics(); n += 2) x.push_back(drive.b(n));
  return x;
}

/// Counter-free splitmix64 stream; small, portable and bit-reproducible
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, n).
  std::size_t below(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r = next();
    while (r >= limit) r = next();
    return static_cast<std::size_t>(r % bound);
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  Rng a(master);
  Rng b(stream ^ a.next());
  return b.next();
}

struct Individual {
  DecisionVector x;
  double f = 0.0;
};

struct Population {
  std::vector<Individual> members;
  int generation = 0;
  std::uint64_t seed = 0;

  std::size_t size() const { return members.size(); }

  /// Lowest objective; ties go to the lowest index.
  std::size_t best_index() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
      if (members[i].f < members[best].f) best = i;
    }
    return best;
  }
  const Individual& best() const { return members[best_index()]; }
};

struct DEParams {
  double F = 0.8;
  double CR = 0.9;
};

/// DE/rand/1/bin trial vectors, one per target, clipped into the bounds.
inline std::vector<DecisionVector> make_trials(const Population& pop, const Bounds& bounds,
                                               const DEParams& params, Rng& rng) {
  const std::size_t np = pop.size();
  if (np < 5) throw ConfigError("differential evolution needs a population of at least 5");
  if (!(params.F >= 0.0 && params.F <= 2.0)) throw ConfigError("F must lie in [0, 2]");
  if (!(params.CR >= 0.0 && params.CR <= 1.0)) throw ConfigError("CR must lie in [0, 1]");
  const std::size_t dim = bounds.size();
  std::vector<DecisionVector> trials(np);
  for (std::size_t i = 0; i < np; ++i) {
    std::size_t r1, r2, r3;
    do r1 = rng.below(np); while (r1 == i);
    do r2 = rng.below(np); while (r2 == i || r2 == r1);
    do r3 = rng.below(np); while (r3 == i || r3 == r1 || r3 == r2);
    const auto& a = pop.members[r1].x;
    const auto& b = pop.members[r2].x;
    const auto& c = pop.members[r3].x;
    DecisionVector trial = pop.members[i].x;
    const std::size_t forced = rng.below(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (k == forced || rng.uniform() < params.CR) trial[k] = a[k] + params.F * (b[k] - c[k]);
    }
    bounds.clip(trial);
    trials[i] = std::move(trial);
  }
  return trials;
}

/// Greedy replacement in index order: a trial wins only when strictly better.
inline void select(Population& pop, std::vector<DecisionVector> trials,
                   const std::vector<double>& values) {
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (values[i] < pop.members[i].f) pop.members[i] = {std::move(trials[i]), values[i]};
  }
  ++pop.generation;
}

/// Batch objective: maps a list of vectors to their values, by index.
using BatchObjective = std::function<std::vector<double>(const std::vector<DecisionVector>&)>;

inline Population de_generation(Population pop, const Bounds& bounds, const DEParams& params,
                                Rng& rng, const BatchObjective& evaluate) {
  auto trials = make_trials(pop, bounds, params, rng);
  const auto values = evaluate(trials);
  select(pop, std::move(trials), values);
  return pop;
}

/// Ring migration: island i sends a copy of its best to island i + 1, which
/// swaps it in for a uniformly chosen non-best member if it beats that member.
inline void migrate(std::vector<Population>& islands, Rng& rng) {
  const std::size_t n = islands.size();
  if (n < 2) return;
  std::vector<Individual> migrants;
  migrants.reserve(n);
  for (const auto& island : islands) migrants.push_back(island.best());
  for (std::size_t i = 0; i < n; ++i) {
    Population& to = islands[(i + 1) % n];
    if (to.size() < 2) continue;
    const std::size_t keep = to.best_index();
    std::size_t slot = rng.below(to.size() - 1);
    if (slot >= keep) ++slot;
    if (migrants[i].f < to.members[slot].f) to.members[slot] = migrants[i];
  }
}

struct IslandConfig {
  std::size_t islands = 4;
  std::size_t population = 16;
  int generations = 30;
  DEParams de{};
  int migration_interval = 1;  ///< generations between ring migrations
  std::uint64_t seed = 20240601;
  unsigned threads = 0;  ///< 0 selects default_threads()

  void validate() const {
    if (islands < 1) throw ConfigError("island count must be >= 1");
    if (population < 5) throw ConfigError("population size must be >= 5");
    if (generations < 0) throw ConfigError("generations must be >= 0");
    if (!(de.F > 0.0 && de.F <= 2.0)) throw ConfigError("F must lie in (0, 2]");
    if (!(de.CR >= 0.0 && de.CR <= 1.0)) throw ConfigError("CR must lie in [0, 1]");
    if (migration_interval < 1) throw ConfigError("migration interval must be >= 1");
  }
};

struct HistoryEntry {
  int generation = 0;
  double best = 0.0;
  DecisionVector x;
};

struct OptimizeResult {
  DecisionVector x;
  double f = 0.0;
  std::vector<HistoryEntry> history;  ///< generation 0 is the initial population
  std::vector<Population> islands;
  std::size_t evaluations = 0;  ///< objective calls actually made
  std::size_t cache_hits = 0;
  double seconds = 0.0;
};

namespace detail {

inline std::string format_vector(const DecisionVector& x) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ']';
  return os.str();
}

struct BitsLess {
  bool operator()(const DecisionVector& a, const DecisionVector& b) const {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(), [](double u, double v) {
          return std::bit_cast<std::uint64_t>(u) < std::bit_cast<std::uint64_t>(v);
        });
  }
};

// Memoizing batch evaluator; duplicates inside one batch are computed once.
class CachedObjective {
 public:
  CachedObjective(std::function<double(const DecisionVector&)> fn, unsigned threads)
      : fn_(std::move(fn)), threads_(threads) {}

  std::vector<double> operator()(const std::vector<DecisionVector>& xs) {
    std::vector<const DecisionVector*> todo;
    for (const auto& x : xs) {
      if (cache_.find(x) == cache_.end() && pending_.insert(x).second) todo.push_back(&x);
    }
    std::vector<double> fresh(todo.size());
    parallel_for(todo.size(), threads_, [&](std::size_t i) {
      double f = 0.0;
      try {
        f = fn_(*todo[i]);
      } catch (const std::exception& e) {
        throw NumericalError(std::string("objective failed for X = ") + format_vector(*todo[i]) +
                             ": " + e.what());
      }
      if (!std::isfinite(f)) {
        throw NumericalError("objective is not finite for X = " + format_vector(*todo[i]));
      }
      fresh[i] = f;
    });
    for (std::size_t i = 0; i < todo.size(); ++i) cache_.emplace(*todo[i], fresh[i]);
    pending_.clear();
    evaluations += todo.size();
    cache_hits += xs.size() - todo.size();
    std::vector<double> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(cache_.at(x));
    return out;
  }

  std::size_t evaluations = 0;
  std::size_t cache_hits = 0;

 private:
  std::function<double(const DecisionVector&)> fn_;
  unsigned threads_;
  std::map<DecisionVector, double, BitsLess> cache_;
  std::set<DecisionVector, BitsLess> pending_;
};

}  // namespace detail

/// Island-model DE minimizing `fn` over the box. Each island draws from its
/// own stream seeded by (seed, island), and every generation's trials are
/// evaluated as one batch, so the outcome does not depend on thread count.
/// `progress`, when set, is called after each generation.
inline OptimizeResult optimize(const IslandConfig& config, const Bounds& bounds,
                               std::function<double(const DecisionVector&)> fn,
                               const std::function<void(const HistoryEntry&)>& progress = {}) {
  config.validate();
  bounds.validate();
  const auto start = std::chrono::steady_clock::now();
  const unsigned threads = config.threads > 0 ? config.threads : default_threads();
  detail::CachedObjective evaluate(std::move(fn), threads);

  std::vector<Rng> streams;
  std::vector<Population> islands(config.islands);
  for (std::size_t k = 0; k < config.islands; ++k) {
    islands[k].seed = mix_seed(config.seed, k);
    streams.emplace_back(islands[k].seed);
  }
  Rng migration(mix_seed(config.seed, ~std::uint64_t{0}));

  // every island's batch goes through one evaluation call
  auto run_batch = [&](std::vector<std::vector<DecisionVector>>& per_island) {
    std::vector<DecisionVector> flat;
    for (const auto& v : per_island) flat.insert(flat.end(), v.begin(), v.end());
    const auto values = evaluate(flat);
    std::vector<std::vector<double>> out(per_island.size());
    std::size_t pos = 0;
    for (std::size_t k = 0; k < per_island.size(); ++k) {
      out[k].assign(values.begin() + static_cast<std::ptrdiff_t>(pos),
                    values.begin() + static_cast<std::ptrdiff_t>(pos + per_island[k].size()));
      pos += per_island[k].size();
    }
    return out;
  };

  std::vector<std::vector<DecisionVector>> batch(config.islands);
  for (std::size_t k = 0; k < config.islands; ++k) {
    for (std::size_t i = 0; i < config.population; ++i) {
      DecisionVector x(bounds.size());
      for (std::size_t d = 0; d < x.size(); ++d) {
        x[d] = bounds.lo[d] + (bounds.hi[d] - bounds.lo[d]) * streams[k].uniform();
      }
      batch[k].push_back(std::move(x));
    }
  }
  {
    const auto values = run_batch(batch);
    for (std::size_t k = 0; k < config.islands; ++k) {
      for (std::size_t i = 0; i < config.population; ++i) {
        islands[k].members.push_back({std::move(batch[k][i]), values[k][i]});
      }
    }
  }

  OptimizeResult result;
  auto record = [&](int generation) {
    std::size_t best_island = 0;
    for (std::size_t k = 1; k < islands.size(); ++k) {
      if (islands[k].best().f < islands[best_island].best().f) best_island = k;
    }
    const Individual& best = islands[best_island].best();
    result.history.push_back({generation, best.f, best.x});
    if (progress) progress(result.history.back());
  };
  record(0);

  for (int g = 1; g <= config.generations; ++g) {
    for (std::size_t k = 0; k < config.islands; ++k) {
      batch[k] = make_trials(islands[k], bounds, config.de, streams[k]);
    }
    const auto values = run_batch(batch);
    for (std::size_t k = 0; k < config.islands; ++k) {
      select(islands[k], std::move(batch[k]), values[k]);
    }
    if (g % config.migration_interval == 0) migrate(islands, migration);
    record(g);
  }

  result.x = result.history.back().x;
  result.f = result.history.back().best;
  result.islands = std::move(islands);
  result.evaluations = evaluate.evaluations;
  result.cache_hits = evaluate.cache_hits;
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

/// Drive-shape optimization: minimizes the cumulative probability over the
/// domain at fixed amplitude.
inline OptimizeResult optimize(const IslandConfig& config, const ObjectiveDomain& domain,
                               double amplitude, const Bounds& bounds, const EvalOptions& eval = {},
                               const std::function<void(const HistoryEntry&)>& progress = {}) {
  domain.validate();
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw ConfigError("amplitude must be finite and >= 0");
  }
  return optimize(
      config, bounds,
      [&](const DecisionVector& x) { return objective(decode(x, bounds), amplitude, domain, eval, 1); },
      progress);
}

}  // namespace floqopt
