#pragma once

// Memory needed to absorb an uncertain number of insertions. Demand is the
// base size times a log-normal factor. A static array must be sized for the
// (1 - failure_prob) quantile of that factor; the growable array allocates
// only the buckets the realised demand touches.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace ggarray {

struct MemoryModelParams {
  double mu = 0.0;
  double sigma = 0.0;
  double failure_prob = 0.01;
  std::uint64_t base_size = 1'000'000;
  std::size_t samples = 100'000;
  std::uint64_t seed = 1;
  std::size_t element_size = 4;

  void validate() const;
};

struct MemoryReport {
  double sigma = 0.0;
  double optimal_mean = 0.0;    // bytes, mean over samples
  double static_p99 = 0.0;      // bytes, analytic quantile sizing
  double ggarray_mean = 0.0;    // bytes, mean over samples
  double static_ratio = 0.0;    // static_p99 / optimal_mean
  double ggarray_ratio = 0.0;   // ggarray_mean / optimal_mean
  double ggarray_worst_ratio = 0.0;  // max over samples of capacity / demand
};

// Inverse of the standard normal CDF. Rational approximation refined with
// one Halley step; absolute error well below 1e-9 on (0, 1).
double normal_quantile(double p);

// exp(mu + sigma * z) with z the (1 - failure_prob) standard normal quantile.
double static_factor(const MemoryModelParams& params);

// Bytes a static array must pre-allocate: ceil(base_size * factor) elements.
std::uint64_t static_requirement(const MemoryModelParams& params);

// Empirical (1 - failure_prob) quantile of `samples` drawn factors.
double monte_carlo_static_factor(const MemoryModelParams& params);

// Fraction of `samples` fresh draws whose demand exceeds base_size * factor.
double empirical_failure_rate(const MemoryModelParams& params, double factor);

// Elements allocated by a growable array with `shards` shards and first
// bucket `first_bucket` after demand-driven growth to `demand` elements
// spread evenly over the shards.
std::uint64_t ggarray_capacity_elements(std::uint64_t demand, std::size_t shards,
                                        std::size_t first_bucket);

std::uint64_t ggarray_capacity_for(std::uint64_t demand, std::size_t shards,
                                   std::size_t first_bucket, std::size_t element_size = 4);

// 0.0, 0.1, ..., 2.0
std::vector<double> default_sigma_grid();

// One report per sigma. Every sigma reuses the same standard normal draws,
// so the curves are deterministic given params.seed.
std::vector<MemoryReport> run_model(const MemoryModelParams& params,
                                    std::span<const double> sigma_grid, std::size_t shards,
                                    std::size_t first_bucket);

void write_memory_csv(std::ostream& out, std::span<const MemoryReport> rows, bool header = true);

}  // namespace ggarray
