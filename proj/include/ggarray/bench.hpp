#pragma once

// Desk-scale benchmark harness. Each experiment runs duplication rounds on
// one or more structures, times the grow / insert / rw phases, and checks
// the final contents against the sequential expectation before returning.
// A mismatch throws BenchMismatch instead of reporting timings.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ggarray/insert_index.hpp"

namespace ggarray::bench {

enum class Structure { static_array, doubling, chunktable, ggarray };
// global: one directory search per element. global_cached: one search per
// range of --rw-grain elements, then a forward walk. per_shard: one task per
// shard, no search.
enum class RwMode { global, global_cached, per_shard };

std::string_view to_string(Structure s) noexcept;
std::string_view to_string(RwMode m) noexcept;
Structure parse_structure(std::string_view name);
RwMode parse_rw_mode(std::string_view name);

// Element updates applied to every element by one rw phase.
inline constexpr std::uint32_t kRwAdds = 30;

struct BenchConfig {
  Structure structure = Structure::ggarray;
  std::size_t shards = 32;
  std::size_t first_bucket = 32;
  std::size_t workers = 1;
  std::size_t initial_size = 100'000;
  std::size_t iterations = 10;
  ReserveAlgo algo = ReserveAlgo::scan;
  RwMode rw_mode = RwMode::per_shard;
  std::size_t work_passes = 1;
  std::size_t repetitions = 1;
  std::uint64_t seed = 1;
  // Two-phase only: elements inserted per existing element each iteration.
  std::size_t multiplier = 1;
  std::size_t rw_grain = 4096;
  // Lanes per reservation round for the baselines' insert path.
  std::size_t lane_block = 1024;
  std::size_t chunk_size = std::size_t{1} << 16;

  void validate() const;
};

struct BenchRecord {
  std::string experiment;
  BenchConfig config;  // echo, with per-row overrides (structure, shards, algo, rw_mode)
  std::size_t iteration = 0;
  std::string phase;  // grow | insert | rw | total
  // Repetition index, or -1 for the median row.
  long repetition = 0;
  std::uint64_t elapsed_ns = 0;
  std::size_t size_after = 0;
  std::uint64_t counter_ops = 0;
  std::uint64_t copies = 0;
  std::uint64_t allocations = 0;
  double speedup = std::numeric_limits<double>::quiet_NaN();
};

class BenchMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Static array, both reservation strategies, one insert record per round.
std::vector<BenchRecord> bench_insert_algos(const BenchConfig& config);

// Growable array for every shard count: grow, insert and rw in all modes.
std::vector<BenchRecord> bench_shard_sweep(const BenchConfig& config,
                                           std::span<const std::size_t> shard_list);
std::vector<std::size_t> default_shard_list();

// The configured structure: grow, insert and rw (config.rw_mode) per round.
std::vector<BenchRecord> bench_grow_insert_rw(const BenchConfig& config);

// Insertion phases alternating with work phases on the growable array
// (flattened for the work) and the chunk-table baseline. Emits a `total`
// row per structure and repetition; the growable array's median total row
// carries the speedup over the chunk table.
std::vector<BenchRecord> bench_two_phase(const BenchConfig& config);

// Final contents of one two-phase run on `structure` (ggarray or
// chunktable), in global order.
std::vector<std::uint32_t> two_phase_contents(const BenchConfig& config, Structure structure);

// Size targets of the two-phase schedule: target[k] for k = 0..iterations.
// The last target is initial_size * 2^iterations for every multiplier.
std::vector<std::size_t> two_phase_targets(const BenchConfig& config);

// Median speedup reported by a two-phase run.
double two_phase_speedup(std::span<const BenchRecord> records);

std::string_view bench_csv_header();
void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records, bool header = true);

}  // namespace ggarray::bench
