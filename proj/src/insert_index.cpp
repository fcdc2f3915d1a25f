#include "ggarray/insert_index.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "ggarray/errors.hpp"

namespace ggarray {

namespace {

void check_group_size(std::size_t group_size) {
  if (group_size == 0 || !std::has_single_bit(group_size)) {
    throw ContractViolation("group size must be a power of two, got " +
                            std::to_string(group_size));
  }
}

std::ptrdiff_t checked_lane_count(std::size_t lanes) {
  if (lanes == 0) throw ContractViolation("ScanRound needs at least one lane");
  return static_cast<std::ptrdiff_t>(lanes);
}

}  // namespace

std::size_t LanePlan::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

void LanePlan::validate() const { check_group_size(group_size); }

std::vector<std::size_t> exclusive_scan(std::span<const std::size_t> counts) {
  std::vector<std::size_t> out(counts.size());
  std::exclusive_scan(counts.begin(), counts.end(), out.begin(), std::size_t{0});
  return out;
}

ReservedRange atomic_reserve(SizeCounter& counter, std::size_t count) noexcept {
  return {counter.advance(count), count};
}

void scan_reserve_into(std::span<const std::size_t> counts, std::size_t group_size,
                       SizeCounter& counter, std::span<ReservedRange> out) {
  check_group_size(group_size);
  if (out.size() != counts.size()) {
    throw ContractViolation("scan_reserve: output span must have one slot per lane");
  }
  for (std::size_t first = 0; first < counts.size(); first += group_size) {
    const std::size_t last = std::min(counts.size(), first + group_size);
    std::size_t running = 0;
    for (std::size_t lane = first; lane < last; ++lane) {
      out[lane] = {running, counts[lane]};
      running += counts[lane];
    }
    const std::size_t base = counter.advance(running);
    for (std::size_t lane = first; lane < last; ++lane) out[lane].start += base;
  }
}

std::vector<ReservedRange> scan_reserve(const LanePlan& plan, SizeCounter& counter) {
  plan.validate();
  std::vector<ReservedRange> out(plan.lanes());
  scan_reserve_into(plan.counts, plan.group_size, counter, out);
  return out;
}

std::string_view to_string(ReserveAlgo algo) noexcept {
  return algo == ReserveAlgo::atomic ? "atomic" : "scan";
}

ReserveAlgo parse_reserve_algo(std::string_view name) {
  if (name == "atomic") return ReserveAlgo::atomic;
  if (name == "scan") return ReserveAlgo::scan;
  throw ContractViolation("unknown reservation algorithm: " + std::string(name));
}

Reserver::Reserver(ReserveAlgo algo, std::size_t group_size)
    : algo_(algo), group_size_(group_size) {
  check_group_size(group_size);
}

std::vector<ReservedRange> Reserver::reserve(SizeCounter& counter,
                                             std::span<const std::size_t> counts) const {
  std::vector<ReservedRange> out(counts.size());
  reserve_into(counter, counts, out);
  return out;
}

void Reserver::reserve_into(SizeCounter& counter, std::span<const std::size_t> counts,
                            std::span<ReservedRange> out) const {
  if (algo_ == ReserveAlgo::scan) {
    scan_reserve_into(counts, group_size_, counter, out);
    return;
  }
  if (out.size() != counts.size()) {
    throw ContractViolation("reserve: output span must have one slot per lane");
  }
  for (std::size_t lane = 0; lane < counts.size(); ++lane) {
    out[lane] = atomic_reserve(counter, counts[lane]);
  }
}

std::size_t Reserver::counter_operations(std::size_t lanes) const noexcept {
  if (algo_ == ReserveAlgo::atomic) return lanes;
  return (lanes + group_size_ - 1) / group_size_;
}

ScanRound::ScanRound(SizeCounter& counter, std::size_t lanes, std::size_t group_size)
    : counter_(counter),
      group_size_(group_size),
      counts_(lanes),
      starts_(lanes),
      barrier_(checked_lane_count(lanes)) {
  check_group_size(group_size);
}

ReservedRange ScanRound::arrive(std::size_t lane, std::size_t count) {
  if (lane >= counts_.size()) throw ContractViolation("ScanRound: lane out of range");
  counts_[lane] = count;
  barrier_.arrive_and_wait();
  if (lane % group_size_ == 0) {
    const std::size_t last = std::min(counts_.size(), lane + group_size_);
    std::size_t running = 0;
    for (std::size_t j = lane; j < last; ++j) {
      starts_[j] = running;
      running += counts_[j];
    }
    const std::size_t base = counter_.advance(running);
    for (std::size_t j = lane; j < last; ++j) starts_[j] += base;
  }
  barrier_.arrive_and_wait();
  const ReservedRange mine{starts_[lane], count};
  // Nobody may start the next round until every lane has read its start.
  barrier_.arrive_and_wait();
  return mine;
}

}  // namespace ggarray
