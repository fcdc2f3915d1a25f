#include "ggarray/memory_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "ggarray/errors.hpp"

namespace ggarray {

namespace {

// Acklam's coefficients.
constexpr double kA[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                         1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double kB[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                         6.680131188771972e+01,  -1.328068155288572e+01};
constexpr double kC[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                         -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
constexpr double kD[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                         3.754408661907416e+00};
constexpr double kLow = 0.02425;

double tail(double q) {
  return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
         ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
}

std::uint64_t shard_capacity(std::uint64_t demand, std::size_t first_bucket) {
  if (demand == 0) return 0;
  const std::uint64_t units = (demand + first_bucket - 1) / first_bucket;
  const auto buckets = static_cast<unsigned>(std::bit_width(units));
  return static_cast<std::uint64_t>(first_bucket) * ((std::uint64_t{1} << buckets) - 1);
}

std::uint64_t demand_for(std::uint64_t base, double factor) {
  return static_cast<std::uint64_t>(std::ceil(static_cast<double>(base) * factor));
}

}  // namespace

void MemoryModelParams::validate() const {
  if (!(sigma >= 0.0)) throw ContractViolation("sigma must be non-negative");
  if (!(failure_prob > 0.0 && failure_prob < 1.0)) {
    throw ContractViolation("failure probability must lie in (0, 1)");
  }
  if (base_size == 0) throw ContractViolation("base size must be positive");
  if (samples == 0) throw ContractViolation("sample count must be positive");
  if (element_size == 0) throw ContractViolation("element size must be positive");
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ContractViolation("normal_quantile needs p in (0, 1), got " + std::to_string(p));
  }
  double x;
  if (p < kLow) {
    x = tail(std::sqrt(-2.0 * std::log(p)));
  } else if (p > 1.0 - kLow) {
    x = -tail(std::sqrt(-2.0 * std::log1p(-p)));
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
        (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double static_factor(const MemoryModelParams& params) {
  params.validate();
  return std::exp(params.mu + params.sigma * normal_quantile(1.0 - params.failure_prob));
}

std::uint64_t static_requirement(const MemoryModelParams& params) {
  return demand_for(params.base_size, static_factor(params)) * params.element_size;
}

double monte_carlo_static_factor(const MemoryModelParams& params) {
  params.validate();
  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> normal;
  std::vector<double> draws(params.samples);
  for (auto& d : draws) d = std::exp(params.mu + params.sigma * normal(rng));
  const auto rank = static_cast<std::size_t>(
      std::ceil((1.0 - params.failure_prob) * static_cast<double>(draws.size())));
  const auto nth = draws.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(rank, 1) - 1);
  std::nth_element(draws.begin(), nth, draws.end());
  return *nth;
}

double empirical_failure_rate(const MemoryModelParams& params, double factor) {
  params.validate();
  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> normal;
  const std::uint64_t limit = demand_for(params.base_size, factor);
  std::size_t failures = 0;
  for (std::size_t i = 0; i < params.samples; ++i) {
    const double f = std::exp(params.mu + params.sigma * normal(rng));
    failures += demand_for(params.base_size, f) > limit ? 1 : 0;
  }
  return static_cast<double>(failures) / static_cast<double>(params.samples);
}

std::uint64_t ggarray_capacity_elements(std::uint64_t demand, std::size_t shards,
                                        std::size_t first_bucket) {
  if (shards == 0) throw ContractViolation("shard count must be positive");
  if (first_bucket == 0 || !std::has_single_bit(first_bucket)) {
    throw ContractViolation("first bucket size must be a power of two");
  }
  const std::uint64_t per = demand / shards;
  const std::uint64_t extra = demand % shards;
  return extra * shard_capacity(per + 1, first_bucket) +
         (shards - extra) * shard_capacity(per, first_bucket);
}

std::uint64_t ggarray_capacity_for(std::uint64_t demand, std::size_t shards,
                                   std::size_t first_bucket, std::size_t element_size) {
  return ggarray_capacity_elements(demand, shards, first_bucket) * element_size;
}

std::vector<double> default_sigma_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(k / 10.0);
  return grid;
}

std::vector<MemoryReport> run_model(const MemoryModelParams& params,
                                    std::span<const double> sigma_grid, std::size_t shards,
                                    std::size_t first_bucket) {
  params.validate();
  std::vector<double> normals(params.samples);
  {
    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> normal;
    for (auto& z : normals) z = normal(rng);
  }
  const auto bytes = static_cast<double>(params.element_size);
  std::vector<MemoryReport> rows;
  rows.reserve(sigma_grid.size());
  for (const double sigma : sigma_grid) {
    MemoryModelParams at = params;
    at.sigma = sigma;
    at.validate();
    double optimal_sum = 0.0;
    double capacity_sum = 0.0;
    double worst = 0.0;
    for (const double z : normals) {
      const std::uint64_t demand = demand_for(params.base_size, std::exp(params.mu + sigma * z));
      const std::uint64_t cap = ggarray_capacity_elements(demand, shards, first_bucket);
      optimal_sum += static_cast<double>(demand);
      capacity_sum += static_cast<double>(cap);
      if (demand > 0) {
        worst = std::max(worst, static_cast<double>(cap) / static_cast<double>(demand));
      }
    }
    const auto n = static_cast<double>(normals.size());
    MemoryReport r;
    r.sigma = sigma;
    r.optimal_mean = optimal_sum / n * bytes;
    r.static_p99 = static_cast<double>(static_requirement(at));
    r.ggarray_mean = capacity_sum / n * bytes;
    r.static_ratio = r.static_p99 / r.optimal_mean;
    r.ggarray_ratio = r.ggarray_mean / r.optimal_mean;
    r.ggarray_worst_ratio = worst;
    rows.push_back(r);
  }
  return rows;
}

void write_memory_csv(std::ostream& out, std::span<const MemoryReport> rows, bool header) {
  if (header) out << "sigma,optimal_mean,static_p99,ggarray_mean,static_ratio,ggarray_ratio\n";
  const auto old_precision = out.precision(10);
  for (const auto& r : rows) {
    out << r.sigma << ',' << r.optimal_mean << ',' << r.static_p99 << ',' << r.ggarray_mean
        << ',' << r.static_ratio << ',' << r.ggarray_ratio << '\n';
  }
  out.precision(old_precision);
}

}  // namespace ggarray
