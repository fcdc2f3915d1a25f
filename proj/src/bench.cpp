#include "ggarray/bench.hpp"

#include <algorithm>
#include <chrono>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>
#include <tuple>

#include "ggarray/baselines.hpp"
#include "ggarray/errors.hpp"
#include "ggarray/sharded_array.hpp"
#include "ggarray/worker_pool.hpp"

namespace ggarray::bench {

namespace {

using Value = std::uint32_t;
using Clock = std::chrono::steady_clock;

template <typename F>
std::uint64_t time_ns(F&& f) {
  const auto t0 = Clock::now();
  f();
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
}

// Expected contents as a multiset: a union of runs of consecutive values.
class Expectation {
 public:
  void add(Value first, std::size_t count) { runs_.push_back({first, count}); }
  void bump(Value delta) {
    for (auto& r : runs_) r.first += delta;
  }

  void verify(std::span<const Value> actual, std::string_view what) const {
    std::size_t expected_size = 0;
    std::uint64_t top = 0;
    for (const auto& r : runs_) {
      expected_size += r.count;
      top = std::max<std::uint64_t>(top, std::uint64_t{r.first} + r.count);
    }
    if (actual.size() != expected_size) {
      throw BenchMismatch(std::string(what) + ": size " + std::to_string(actual.size()) +
                          ", oracle expects " + std::to_string(expected_size));
    }
    std::vector<std::uint16_t> histogram(top, 0);
    for (const auto& r : runs_) {
      for (std::size_t k = 0; k < r.count; ++k) ++histogram[r.first + k];
    }
    for (const Value v : actual) {
      if (v >= top || histogram[v] == 0) {
        throw BenchMismatch(std::string(what) + ": unexpected value " + std::to_string(v));
      }
      --histogram[v];
    }
  }

 private:
  struct Run {
    Value first;
    std::size_t count;
  };
  std::vector<Run> runs_;
};

std::vector<Value> initial_values(std::size_t n, std::uint64_t seed) {
  std::vector<Value> v(n);
  std::iota(v.begin(), v.end(), Value{0});
  std::mt19937_64 rng(seed);
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

template <typename Body>
void parallel_ranges(WorkerPool& pool, std::size_t n, std::size_t grain, Body&& body) {
  const std::size_t tasks = (n + grain - 1) / grain;
  pool.parallel_for(tasks, [&](std::size_t t) {
    const std::size_t first = t * grain;
    body(first, std::min(n, first + grain));
  });
}

inline void rw_kernel(Value& v) {
  for (Value k = 0; k < kRwAdds; ++k) v += 1;
}

struct GrowStats {
  std::uint64_t copies = 0;
  std::uint64_t allocations = 0;
};

// Uniform surface over the three baselines for the benchmark loops.
template <typename Array>
class BaselineDriver {
 public:
  BaselineDriver(std::unique_ptr<Array> array, const BenchConfig& config, WorkerPool& pool)
      : a_(std::move(array)), config_(config), pool_(pool) {}

  void fill(std::span<const Value> values) {
    a_->resize(values.size());
    a_->insert_batch(values);
  }

  std::size_t size() const { return a_->size(); }

  GrowStats grow(std::size_t target) {
    const auto copies = a_->copies();
    const auto capacity = a_->capacity();
    a_->resize(target);
    GrowStats stats{a_->copies() - copies, 0};
    if constexpr (std::is_same_v<Array, ChunkTableArray<Value>>) {
      stats.allocations = (a_->capacity() - capacity) / a_->chunk_size();
    } else {
      stats.allocations = a_->capacity() != capacity ? 1 : 0;
    }
    return stats;
  }

  void prepare_insert(std::size_t count, Value base) {
    pending_count_ = count;
    pending_base_ = base;
  }

  // One lane per new element, lane_block lanes per reservation round.
  std::uint64_t insert(const Reserver& reserver) {
    const auto ops = a_->counter_operations();
    const std::size_t block = config_.lane_block;
    const std::size_t count = pending_count_;
    const Value base = pending_base_;
    const std::size_t rounds = (count + block - 1) / block;
    pool_.parallel_for(rounds, [&](std::size_t round) {
      const std::size_t first = round * block;
      const std::size_t lanes = std::min(block, count - first);
      std::vector<std::size_t> counts(lanes, 1);
      std::vector<ReservedRange> ranges(lanes);
      a_->reserve_lanes(counts, reserver, ranges);
      for (std::size_t j = 0; j < lanes; ++j) {
        (*a_)[ranges[j].start] = base + static_cast<Value>(first + j);
      }
    });
    return a_->counter_operations() - ops;
  }

  void rw(RwMode) {
    parallel_ranges(pool_, size(), config_.rw_grain, [&](std::size_t first, std::size_t last) {
      if constexpr (std::is_same_v<Array, ChunkTableArray<Value>>) {
        a_->for_each_range(first, last, rw_kernel);
      } else {
        for (std::size_t i = first; i < last; ++i) rw_kernel((*a_)[i]);
      }
    });
  }

  void work(std::size_t passes) {
    for (std::size_t p = 0; p < passes; ++p) {
      parallel_ranges(pool_, size(), config_.rw_grain, [&](std::size_t first, std::size_t last) {
        if constexpr (std::is_same_v<Array, ChunkTableArray<Value>>) {
          a_->for_each_range(first, last, [](Value& v) { v += 1; });
        } else {
          for (std::size_t i = first; i < last; ++i) (*a_)[i] += 1;
        }
      });
    }
  }

  std::vector<Value> contents() const { return a_->to_vector(); }

 private:
  std::unique_ptr<Array> a_;
  const BenchConfig& config_;
  WorkerPool& pool_;
  std::size_t pending_count_ = 0;
  Value pending_base_ = 0;
};

class GrowableDriver {
 public:
  GrowableDriver(std::size_t shards, const BenchConfig& config, WorkerPool& pool)
      : a_(shards, config.first_bucket), config_(config), pool_(pool) {}

  void fill(std::span<const Value> values) {
    a_.insert_parallel(split_even(values, a_.shard_count()), Reserver(), &pool_);
  }

  std::size_t size() const { return a_.size(); }
  const GrowableArray<Value>& array() const { return a_; }

  GrowStats grow(std::size_t target) { return {0, a_.grow(target, &pool_)}; }

  // A duplication round gives every shard its own size; any other count is
  // split evenly. Values are generated here so insert() times only the
  // structure.
  void prepare_insert(std::size_t count, Value base) {
    const std::size_t shards = a_.shard_count();
    std::vector<std::size_t> per_shard(shards);
    if (count == a_.size()) {
      for (std::size_t s = 0; s < shards; ++s) per_shard[s] = a_.prefix()[s + 1] - a_.prefix()[s];
    } else {
      for (std::size_t s = 0; s < shards; ++s) {
        per_shard[s] = count / shards + (s < count % shards ? 1 : 0);
      }
    }
    const auto offsets = exclusive_scan(per_shard);
    batches_.assign(shards, {});
    pool_.parallel_for(shards, [&](std::size_t s) {
      batches_[s].resize(per_shard[s]);
      std::iota(batches_[s].begin(), batches_[s].end(), base + static_cast<Value>(offsets[s]));
    });
  }

  std::uint64_t insert(const Reserver& reserver) {
    const auto ops = a_.counter_operations();
    a_.insert_parallel(batches_, reserver, &pool_);
    batches_.clear();
    return a_.counter_operations() - ops;
  }

  void rw(RwMode mode) {
    switch (mode) {
      case RwMode::per_shard:
        a_.for_each_shard(rw_kernel, &pool_);
        break;
      case RwMode::global:
        parallel_ranges(pool_, size(), config_.rw_grain, [&](std::size_t first, std::size_t last) {
          for (std::size_t g = first; g < last; ++g) {
            Value v = a_.get_global(g);
            rw_kernel(v);
            a_.set_global(g, v);
          }
        });
        break;
      case RwMode::global_cached:
        parallel_ranges(pool_, size(), config_.rw_grain, [&](std::size_t first, std::size_t last) {
          auto pos = a_.locate_shard(first);
          for (std::size_t g = first; g < last;) {
            const std::size_t shard_end = a_.prefix()[pos.shard + 1];
            const std::size_t stop = std::min(last, shard_end);
            a_.shard(pos.shard).for_each_range(pos.local, pos.local + (stop - g), rw_kernel);
            g = stop;
            if (g < last) pos = a_.locate_shard(g);
          }
        });
        break;
    }
  }

  void work(std::size_t passes) {
    std::vector<Value> flat = a_.flatten(&pool_);
    for (std::size_t p = 0; p < passes; ++p) {
      parallel_ranges(pool_, flat.size(), config_.rw_grain,
                      [&](std::size_t first, std::size_t last) {
                        for (std::size_t i = first; i < last; ++i) flat[i] += 1;
                      });
    }
    a_.store_flat(flat, &pool_);
  }

  std::vector<Value> contents() const { return a_.flatten(); }

 private:
  GrowableArray<Value> a_;
  const BenchConfig& config_;
  WorkerPool& pool_;
  std::vector<std::vector<Value>> batches_;
};

std::size_t final_size(const BenchConfig& c) { return c.initial_size << c.iterations; }

BenchRecord make_record(std::string_view experiment, const BenchConfig& config,
                        std::size_t iteration, std::string_view phase, long repetition) {
  BenchRecord r;
  r.experiment = experiment;
  r.config = config;
  r.iteration = iteration;
  r.phase = phase;
  r.repetition = repetition;
  return r;
}

std::uint64_t median(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

// Adds one repetition = -1 row per group of rows that differ only in
// repetition and timing.
void append_medians(std::vector<BenchRecord>& records) {
  using Key = std::tuple<std::string, Structure, std::size_t, ReserveAlgo, RwMode, std::size_t,
                         std::size_t, std::string>;
  std::map<Key, std::vector<std::size_t>> groups;
  std::vector<Key> order;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    Key key{r.experiment, r.config.structure, r.config.shards, r.config.algo, r.config.rw_mode,
            r.config.work_passes, r.iteration, r.phase};
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.push_back(i);
  }
  for (const auto& key : order) {
    const auto& members = groups[key];
    std::vector<std::uint64_t> times;
    for (auto i : members) times.push_back(records[i].elapsed_ns);
    BenchRecord m = records[members.front()];
    m.repetition = -1;
    m.elapsed_ns = median(std::move(times));
    m.speedup = std::numeric_limits<double>::quiet_NaN();
    records.push_back(std::move(m));
  }
}

template <typename Driver>
void duplication_rounds(Driver& driver, const BenchConfig& config, std::string_view experiment,
                        const BenchConfig& echo, long rep, bool with_grow, bool with_rw,
                        std::vector<BenchRecord>& out, Expectation& expected) {
  const Reserver reserver(config.algo);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    const std::size_t before = driver.size();
    if (with_grow) {
      GrowStats stats;
      auto r = make_record(experiment, echo, it, "grow", rep);
      r.elapsed_ns = time_ns([&] { stats = driver.grow(2 * before); });
      r.size_after = driver.size();
      r.copies = stats.copies;
      r.allocations = stats.allocations;
      out.push_back(std::move(r));
    }
    driver.prepare_insert(before, static_cast<Value>(before));
    std::uint64_t ops = 0;
    auto r = make_record(experiment, echo, it, "insert", rep);
    r.elapsed_ns = time_ns([&] { ops = driver.insert(reserver); });
    r.size_after = driver.size();
    r.counter_ops = ops;
    out.push_back(std::move(r));
    expected.add(static_cast<Value>(before), before);
    if (with_rw) {
      auto rr = make_record(experiment, echo, it, "rw", rep);
      rr.elapsed_ns = time_ns([&] { driver.rw(config.rw_mode); });
      rr.size_after = driver.size();
      out.push_back(std::move(rr));
      expected.bump(kRwAdds);
    }
  }
}

template <typename Driver>
void run_grow_insert_rw(Driver& driver, const BenchConfig& config,
                        std::vector<BenchRecord>& out, long rep) {
  Expectation expected;
  driver.fill(initial_values(config.initial_size, config.seed));
  expected.add(0, config.initial_size);
  duplication_rounds(driver, config, "grow-insert-rw", config, rep, true, true, out, expected);
  expected.verify(driver.contents(), "grow-insert-rw");
}

template <typename Driver>
std::uint64_t run_two_phase(Driver& driver, const BenchConfig& config, BenchConfig echo,
                            std::vector<BenchRecord>* out, long rep,
                            std::vector<Value>* contents) {
  const auto targets = two_phase_targets(config);
  Expectation expected;
  driver.fill(initial_values(targets.front(), config.seed));
  expected.add(0, targets.front());
  const Reserver reserver(config.algo);
  std::uint64_t total = 0;
  auto emit = [&](std::size_t it, std::string_view phase, std::uint64_t ns, GrowStats stats = {},
                  std::uint64_t ops = 0) {
    total += ns;
    if (out == nullptr) return;
    auto r = make_record("two-phase", echo, it, phase, rep);
    r.elapsed_ns = ns;
    r.size_after = driver.size();
    r.copies = stats.copies;
    r.allocations = stats.allocations;
    r.counter_ops = ops;
    out->push_back(std::move(r));
  };
  for (std::size_t it = 0; it < config.iterations; ++it) {
    const std::size_t before = driver.size();
    const std::size_t count = targets[it + 1] - before;
    GrowStats stats;
    emit(it, "grow", time_ns([&] { stats = driver.grow(targets[it + 1]); }), stats);
    driver.prepare_insert(count, static_cast<Value>(before));
    std::uint64_t ops = 0;
    emit(it, "insert", time_ns([&] { ops = driver.insert(reserver); }), {}, ops);
    expected.add(static_cast<Value>(before), count);
    emit(it, "rw", time_ns([&] { driver.work(config.work_passes); }));
    expected.bump(static_cast<Value>(config.work_passes));
  }
  std::vector<Value> final_contents = driver.contents();
  expected.verify(final_contents, "two-phase");
  if (out != nullptr) {
    auto r = make_record("two-phase", echo, config.iterations, "total", rep);
    r.elapsed_ns = total;
    r.size_after = driver.size();
    out->push_back(std::move(r));
  }
  if (contents != nullptr) *contents = std::move(final_contents);
  return total;
}

template <typename Body>
void with_structure(Structure structure, const BenchConfig& config, std::size_t capacity,
                    WorkerPool& pool, Body&& body) {
  switch (structure) {
    case Structure::static_array: {
      BaselineDriver d(std::make_unique<StaticArray<Value>>(capacity), config, pool);
      body(d);
      break;
    }
    case Structure::doubling: {
      BaselineDriver d(std::make_unique<DoublingArray<Value>>(config.initial_size), config, pool);
      body(d);
      break;
    }
    case Structure::chunktable: {
      BaselineDriver d(std::make_unique<ChunkTableArray<Value>>(config.chunk_size), config, pool);
      body(d);
      break;
    }
    case Structure::ggarray: {
      GrowableDriver d(config.shards, config, pool);
      body(d);
      break;
    }
  }
}

std::string format_speedup(double s) {
  if (std::isnan(s)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

}  // namespace

std::string_view to_string(Structure s) noexcept {
  switch (s) {
    case Structure::static_array: return "static";
    case Structure::doubling: return "doubling";
    case Structure::chunktable: return "chunktable";
    case Structure::ggarray: return "ggarray";
  }
  return "?";
}

std::string_view to_string(RwMode m) noexcept {
  switch (m) {
    case RwMode::global: return "global";
    case RwMode::global_cached: return "global_cached";
    case RwMode::per_shard: return "per_shard";
  }
  return "?";
}

Structure parse_structure(std::string_view name) {
  for (auto s : {Structure::static_array, Structure::doubling, Structure::chunktable,
                 Structure::ggarray}) {
    if (name == to_string(s)) return s;
  }
  throw ContractViolation("unknown structure: " + std::string(name));
}

RwMode parse_rw_mode(std::string_view name) {
  for (auto m : {RwMode::global, RwMode::global_cached, RwMode::per_shard}) {
    if (name == to_string(m)) return m;
  }
  throw ContractViolation("unknown rw mode: " + std::string(name));
}

void BenchConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ContractViolation(what);
  };
  require(iterations >= 1, "iterations must be >= 1");
  require(iterations <= 40, "iterations must be <= 40");
  require(workers >= 1, "workers must be >= 1");
  require(initial_size >= 1, "initial size must be >= 1");
  require(repetitions >= 1, "repetitions must be >= 1");
  require(work_passes >= 1, "work passes must be >= 1");
  require(shards >= 1, "shards must be >= 1");
  require(multiplier >= 1, "multiplier must be >= 1");
  require(rw_grain >= 1, "rw grain must be >= 1");
  require(lane_block >= 1, "lane block must be >= 1");
  require(std::has_single_bit(first_bucket), "first bucket must be a power of two");
  require(std::has_single_bit(chunk_size), "chunk size must be a power of two");
  require(initial_size <= (std::size_t{1} << 32) >> iterations,
          "initial_size * 2^iterations must fit in 32-bit element values");
  const double headroom = static_cast<double>(final_size(*this)) +
                          static_cast<double>(kRwAdds + work_passes) * static_cast<double>(iterations);
  require(headroom < 4294967296.0, "element values would overflow 32 bits");
}

std::vector<std::size_t> default_shard_list() {
  return {1, 4, 16, 32, 64, 256, 512, 1024, 4096};
}

std::vector<BenchRecord> bench_insert_algos(const BenchConfig& config) {
  config.validate();
  WorkerPool pool(config.workers);
  std::vector<BenchRecord> out;
  for (const auto algo : {ReserveAlgo::atomic, ReserveAlgo::scan}) {
    BenchConfig run = config;
    run.structure = Structure::static_array;
    run.algo = algo;
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      BaselineDriver driver(std::make_unique<StaticArray<Value>>(final_size(config)), run, pool);
      Expectation expected;
      driver.fill(initial_values(config.initial_size, config.seed));
      expected.add(0, config.initial_size);
      duplication_rounds(driver, run, "insert-algos", run, static_cast<long>(rep), false, false,
                         out, expected);
      expected.verify(driver.contents(), "insert-algos");
    }
  }
  append_medians(out);
  return out;
}

std::vector<BenchRecord> bench_shard_sweep(const BenchConfig& config,
                                           std::span<const std::size_t> shard_list) {
  config.validate();
  if (shard_list.empty()) throw ContractViolation("shard sweep needs at least one shard count");
  WorkerPool pool(config.workers);
  std::vector<BenchRecord> out;
  const Reserver reserver(config.algo);
  for (const std::size_t shards : shard_list) {
    BenchConfig echo = config;
    echo.structure = Structure::ggarray;
    echo.shards = shards;
    echo.validate();
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      const long r = static_cast<long>(rep);
      GrowableDriver driver(shards, echo, pool);
      Expectation expected;
      driver.fill(initial_values(config.initial_size, config.seed));
      expected.add(0, config.initial_size);
      for (std::size_t it = 0; it < config.iterations; ++it) {
        const std::size_t before = driver.size();
        GrowStats stats;
        auto g = make_record("shard-sweep", echo, it, "grow", r);
        g.elapsed_ns = time_ns([&] { stats = driver.grow(2 * before); });
        g.size_after = driver.size();
        g.allocations = stats.allocations;
        out.push_back(std::move(g));

        driver.prepare_insert(before, static_cast<Value>(before));
        std::uint64_t ops = 0;
        auto ins = make_record("shard-sweep", echo, it, "insert", r);
        ins.elapsed_ns = time_ns([&] { ops = driver.insert(reserver); });
        ins.size_after = driver.size();
        ins.counter_ops = ops;
        out.push_back(std::move(ins));
        expected.add(static_cast<Value>(before), before);

        for (const auto mode : {RwMode::global, RwMode::global_cached, RwMode::per_shard}) {
          BenchConfig mode_echo = echo;
          mode_echo.rw_mode = mode;
          auto rw = make_record("shard-sweep", mode_echo, it, "rw", r);
          rw.elapsed_ns = time_ns([&] { driver.rw(mode); });
          rw.size_after = driver.size();
          out.push_back(std::move(rw));
          expected.bump(kRwAdds);
        }
      }
      expected.verify(driver.contents(), "shard-sweep");
    }
  }
  append_medians(out);
  return out;
}

std::vector<BenchRecord> bench_grow_insert_rw(const BenchConfig& config) {
  config.validate();
  WorkerPool pool(config.workers);
  std::vector<BenchRecord> out;
  for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
    with_structure(config.structure, config, final_size(config), pool, [&](auto& driver) {
      run_grow_insert_rw(driver, config, out, static_cast<long>(rep));
    });
  }
  append_medians(out);
  return out;
}

std::vector<std::size_t> two_phase_targets(const BenchConfig& config) {
  config.validate();
  const double end = static_cast<double>(final_size(config));
  const double growth = static_cast<double>(config.multiplier + 1);
  std::vector<std::size_t> targets(config.iterations + 1);
  for (std::size_t k = 0; k <= config.iterations; ++k) {
    const double t = end / std::pow(growth, static_cast<double>(config.iterations - k));
    targets[k] = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(t)));
  }
  targets.back() = final_size(config);
  return targets;
}

std::vector<BenchRecord> bench_two_phase(const BenchConfig& config) {
  config.validate();
  WorkerPool pool(config.workers);
  std::vector<BenchRecord> out;
  std::vector<std::uint64_t> chunk_totals;
  std::vector<std::uint64_t> grow_totals;
  for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
    for (const auto structure : {Structure::chunktable, Structure::ggarray}) {
      BenchConfig echo = config;
      echo.structure = structure;
      with_structure(structure, config, 0, pool, [&](auto& driver) {
        const auto total = run_two_phase(driver, config, echo, &out, static_cast<long>(rep), nullptr);
        (structure == Structure::chunktable ? chunk_totals : grow_totals).push_back(total);
      });
    }
    out.back().speedup = static_cast<double>(chunk_totals.back()) /
                         static_cast<double>(grow_totals.back());
  }
  append_medians(out);
  for (auto& r : out) {
    if (r.repetition == -1 && r.phase == "total" && r.config.structure == Structure::ggarray) {
      r.speedup = static_cast<double>(median(chunk_totals)) / static_cast<double>(median(grow_totals));
    }
  }
  return out;
}

std::vector<std::uint32_t> two_phase_contents(const BenchConfig& config, Structure structure) {
  config.validate();
  if (structure != Structure::ggarray && structure != Structure::chunktable) {
    throw ContractViolation("two-phase runs on ggarray or chunktable");
  }
  WorkerPool pool(config.workers);
  std::vector<Value> contents;
  with_structure(structure, config, 0, pool, [&](auto& driver) {
    run_two_phase(driver, config, config, nullptr, 0, &contents);
  });
  return contents;
}

double two_phase_speedup(std::span<const BenchRecord> records) {
  for (const auto& r : records) {
    if (r.experiment == "two-phase" && r.repetition == -1 && r.phase == "total" &&
        r.config.structure == Structure::ggarray) {
      return r.speedup;
    }
  }
  throw ContractViolation("records contain no two-phase median total row");
}

std::string_view bench_csv_header() {
  return "experiment,structure,shards,first_bucket,workers,initial_size,iterations,algo,"
         "rw_mode,work_passes,repetitions,seed,iteration,phase,repetition,elapsed_ns,"
         "size_after,counter_ops,copies,allocations,speedup";
}

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records, bool header) {
  if (header) out << bench_csv_header() << '\n';
  for (const auto& r : records) {
    const auto& c = r.config;
    out << r.experiment << ',' << to_string(c.structure) << ',' << c.shards << ','
        << c.first_bucket << ',' << c.workers << ',' << c.initial_size << ',' << c.iterations
        << ',' << ggarray::to_string(c.algo) << ',' << to_string(c.rw_mode) << ','
        << c.work_passes << ',' << c.repetitions << ',' << c.seed << ',' << r.iteration << ','
        << r.phase << ',';
    if (r.repetition < 0) {
      out << "median";
    } else {
      out << r.repetition;
    }
    out << ',' << r.elapsed_ns << ',' << r.size_after << ',' << r.counter_ops << ',' << r.copies
        << ',' << r.allocations << ',' << format_speedup(r.speedup) << '\n';
  }
}

}  // namespace ggarray::bench
