#pragma once

// Index reservation: handing each inserter a unique, contiguous range of
// slots past the current size of a structure.
//
// Two strategies are provided. `atomic` advances the shared counter once per
// lane. `scan` computes a group-local exclusive prefix sum over the lanes
// and advances the shared counter once per group for the group total, so a
// round of L lanes touches the counter ceil(L / group_size) times.

#include <atomic>
#include <barrier>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ggarray {

struct ReservedRange {
  std::size_t start = 0;
  std::size_t count = 0;

  std::size_t end() const noexcept { return start + count; }
  bool operator==(const ReservedRange&) const = default;
};

// Shared size counter. Every read-modify-write is tallied so tests and
// benchmarks can measure contention on the counter directly.
class SizeCounter {
 public:
  explicit SizeCounter(std::size_t initial = 0) noexcept : value_(initial) {}
  SizeCounter(const SizeCounter&) = delete;
  SizeCounter& operator=(const SizeCounter&) = delete;

  std::size_t load(std::memory_order order = std::memory_order_acquire) const noexcept {
    return value_.load(order);
  }

  // Returns the value before the advance.
  std::size_t advance(std::size_t n) noexcept {
    operations_.fetch_add(1, std::memory_order_relaxed);
    return value_.fetch_add(n, std::memory_order_acq_rel);
  }

  // Undoes `range` only if nothing was reserved after it. Not tallied.
  bool try_rollback(const ReservedRange& range) noexcept {
    std::size_t expected = range.end();
    return value_.compare_exchange_strong(expected, range.start, std::memory_order_acq_rel);
  }

  // Requires exclusive access.
  void store(std::size_t v) noexcept { value_.store(v, std::memory_order_release); }

  std::uint64_t operations() const noexcept {
    return operations_.load(std::memory_order_relaxed);
  }
  void reset_operations() noexcept { operations_.store(0, std::memory_order_relaxed); }

 private:
  alignas(64) std::atomic<std::size_t> value_;
  alignas(64) std::atomic<std::uint64_t> operations_{0};
};

inline constexpr std::size_t kDefaultGroupSize = 32;

// Per-lane insertion counts for one reservation round.
struct LanePlan {
  std::vector<std::size_t> counts;
  std::size_t group_size = kDefaultGroupSize;

  std::size_t lanes() const noexcept { return counts.size(); }
  std::size_t total() const noexcept;
  // Throws ContractViolation unless group_size is a non-zero power of two.
  void validate() const;
};

// out[0] = 0, out[j] = out[j-1] + counts[j-1].
std::vector<std::size_t> exclusive_scan(std::span<const std::size_t> counts);

ReservedRange atomic_reserve(SizeCounter& counter, std::size_t count) noexcept;

std::vector<ReservedRange> scan_reserve(const LanePlan& plan, SizeCounter& counter);

// Allocation-free form of scan_reserve; `out` must have one slot per lane.
void scan_reserve_into(std::span<const std::size_t> counts, std::size_t group_size,
                       SizeCounter& counter, std::span<ReservedRange> out);

enum class ReserveAlgo { atomic, scan };

std::string_view to_string(ReserveAlgo algo) noexcept;
// Accepts "atomic" or "scan"; throws ContractViolation otherwise.
ReserveAlgo parse_reserve_algo(std::string_view name);

// A reservation strategy as a value, passed to the insert paths of every
// structure in the library.
class Reserver {
 public:
  explicit Reserver(ReserveAlgo algo = ReserveAlgo::scan,
                    std::size_t group_size = kDefaultGroupSize);

  ReserveAlgo algo() const noexcept { return algo_; }
  std::size_t group_size() const noexcept { return group_size_; }

  // One range per lane; lane j's range has length counts[j].
  std::vector<ReservedRange> reserve(SizeCounter& counter,
                                     std::span<const std::size_t> counts) const;
  void reserve_into(SizeCounter& counter, std::span<const std::size_t> counts,
                    std::span<ReservedRange> out) const;

  // Single-lane round. Both strategies issue exactly one counter operation.
  ReservedRange reserve_one(SizeCounter& counter, std::size_t count) const noexcept {
    return atomic_reserve(counter, count);
  }

  // Shared-counter operations a round of `lanes` lanes performs.
  std::size_t counter_operations(std::size_t lanes) const noexcept;

 private:
  ReserveAlgo algo_;
  std::size_t group_size_;
};

// Cooperative scan reservation where every lane is a separate thread. All
// `lanes` participants call arrive() once per round and rendezvous at an
// internal barrier; the first lane of each group publishes the group total
// to the counter. Reusable across rounds.
class ScanRound {
 public:
  ScanRound(SizeCounter& counter, std::size_t lanes,
            std::size_t group_size = kDefaultGroupSize);

  ReservedRange arrive(std::size_t lane, std::size_t count);

  std::size_t lanes() const noexcept { return counts_.size(); }

 private:
  SizeCounter& counter_;
  std::size_t group_size_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> starts_;
  std::barrier<> barrier_;
};

}  // namespace ggarray
