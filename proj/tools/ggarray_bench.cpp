// Benchmark CLI: runs one experiment and writes CSV to --out (or stdout).

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ggarray/bench.hpp"
#include "ggarray/memory_model.hpp"

namespace {

using ggarray::bench::BenchConfig;
using ggarray::bench::BenchRecord;

struct Options {
  BenchConfig config;
  std::string structure = "ggarray";
  std::string algo = "scan";
  std::string rw_mode = "per_shard";
  std::string out;
  bool csv_header = true;
  std::vector<std::size_t> shard_list = ggarray::bench::default_shard_list();

  // memory-model
  double mu = 0.0;
  double failure_prob = 0.01;
  std::uint64_t base_size = 1'000'000;
  std::size_t samples = 100'000;
  std::size_t element_size = 4;
};

void add_common(CLI::App* cmd, Options& o) {
  auto& c = o.config;
  cmd->add_option("--structure", o.structure, "static | doubling | chunktable | ggarray")
      ->capture_default_str();
  cmd->add_option("--shards", c.shards, "shard count of the growable array")->capture_default_str();
  cmd->add_option("--first-bucket", c.first_bucket, "first bucket size (power of two)")
      ->capture_default_str();
  cmd->add_option("--workers", c.workers, "worker threads")->capture_default_str();
  cmd->add_option("--initial-size", c.initial_size, "elements before the first round")
      ->capture_default_str();
  cmd->add_option("--iterations", c.iterations, "duplication rounds")->capture_default_str();
  cmd->add_option("--algo", o.algo, "atomic | scan")->capture_default_str();
  cmd->add_option("--rw-mode", o.rw_mode, "global | global_cached | per_shard")
      ->capture_default_str();
  cmd->add_option("--work-passes", c.work_passes, "work passes per two-phase iteration")
      ->capture_default_str();
  cmd->add_option("--repetitions", c.repetitions, "repetitions (median reported)")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "seed")->capture_default_str();
  cmd->add_option("--multiplier", c.multiplier, "two-phase: inserts per element per iteration")
      ->capture_default_str();
  cmd->add_option("--rw-grain", c.rw_grain, "elements per rw task")->capture_default_str();
  cmd->add_option("--lane-block", c.lane_block, "lanes per reservation round (baselines)")
      ->capture_default_str();
  cmd->add_option("--chunk-size", c.chunk_size, "chunk-table chunk size (power of two)")
      ->capture_default_str();
  cmd->add_option("--out", o.out, "CSV output path (stdout when empty)");
  cmd->add_flag("--csv-header,!--no-csv-header", o.csv_header, "emit the CSV header row")
      ->capture_default_str();
}

void finish_config(Options& o) {
  o.config.structure = ggarray::bench::parse_structure(o.structure);
  o.config.algo = ggarray::parse_reserve_algo(o.algo);
  o.config.rw_mode = ggarray::bench::parse_rw_mode(o.rw_mode);
  o.config.validate();
}

template <typename Write>
void emit(const Options& o, Write&& write) {
  if (o.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + o.out);
  write(file);
  if (!file) throw std::runtime_error("failed writing " + o.out);
}

void emit_records(const Options& o, const std::vector<BenchRecord>& records) {
  emit(o, [&](std::ostream& os) { ggarray::bench::write_bench_csv(os, records, o.csv_header); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Growable sharded array benchmarks"};
  app.require_subcommand(1);
  Options o;

  auto* insert_algos = app.add_subcommand("insert-algos", "atomic vs scan reservation, static array");
  auto* shard_sweep = app.add_subcommand("shard-sweep", "grow/insert/rw over shard counts");
  auto* grow_insert_rw = app.add_subcommand("grow-insert-rw", "per-round grow, insert and rw");
  auto* two_phase = app.add_subcommand("two-phase", "insert phases alternating with work phases");
  auto* memory = app.add_subcommand("memory-model", "static vs growable memory under log-normal demand");

  for (auto* cmd : {insert_algos, shard_sweep, grow_insert_rw, two_phase}) add_common(cmd, o);
  shard_sweep->add_option("--shard-list", o.shard_list, "shard counts to sweep")
      ->delimiter(',')
      ->capture_default_str();

  memory->add_option("--mu", o.mu, "log-normal mu")->capture_default_str();
  memory->add_option("--failure-prob", o.failure_prob, "allowed static failure rate")
      ->capture_default_str();
  memory->add_option("--base-size", o.base_size, "array size the factor multiplies")
      ->capture_default_str();
  memory->add_option("--samples", o.samples, "Monte Carlo samples per sigma")->capture_default_str();
  memory->add_option("--element-size", o.element_size, "bytes per element")->capture_default_str();
  memory->add_option("--shards", o.config.shards, "shard count")->capture_default_str();
  memory->add_option("--first-bucket", o.config.first_bucket, "first bucket size")
      ->capture_default_str();
  memory->add_option("--seed", o.config.seed, "seed")->capture_default_str();
  memory->add_option("--out", o.out, "CSV output path (stdout when empty)");
  memory->add_flag("--csv-header,!--no-csv-header", o.csv_header, "emit the CSV header row")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*memory) {
      ggarray::MemoryModelParams params;
      params.mu = o.mu;
      params.failure_prob = o.failure_prob;
      params.base_size = o.base_size;
      params.samples = o.samples;
      params.seed = o.config.seed;
      params.element_size = o.element_size;
      const auto grid = ggarray::default_sigma_grid();
      const auto rows = ggarray::run_model(params, grid, o.config.shards, o.config.first_bucket);
      emit(o, [&](std::ostream& os) { ggarray::write_memory_csv(os, rows, o.csv_header); });
      return 0;
    }
    finish_config(o);
    if (*insert_algos) emit_records(o, ggarray::bench::bench_insert_algos(o.config));
    if (*shard_sweep) emit_records(o, ggarray::bench::bench_shard_sweep(o.config, o.shard_list));
    if (*grow_insert_rw) emit_records(o, ggarray::bench::bench_grow_insert_rw(o.config));
    if (*two_phase) emit_records(o, ggarray::bench::bench_two_phase(o.config));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
