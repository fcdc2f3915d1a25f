#pragma once

// GrowableArray: S independent BucketVector shards plus a prefix directory
// of shard sizes. The directory is rebuilt at commit(), which is the epoch
// boundary; between commits, readers see the contents as of the last
// commit even if shards have grown since.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ggarray/bucket_vector.hpp"
#include "ggarray/errors.hpp"
#include "ggarray/insert_index.hpp"
#include "ggarray/worker_pool.hpp"

namespace ggarray {

inline constexpr std::size_t kDefaultShards = 32;

struct ShardPosition {
  std::size_t shard = 0;
  std::size_t local = 0;

  bool operator==(const ShardPosition&) const = default;
};

// Binary search over an exclusive prefix table with S + 1 entries. Empty
// shards are never returned.
inline ShardPosition locate_in_prefix(std::span<const std::size_t> prefix, std::size_t g) {
  if (prefix.empty() || g >= prefix.back()) {
    throw OutOfBounds("global index " + std::to_string(g) + " >= committed size " +
                      std::to_string(prefix.empty() ? 0 : prefix.back()));
  }
  const auto it = std::upper_bound(prefix.begin(), prefix.end(), g);
  const auto s = static_cast<std::size_t>(it - prefix.begin()) - 1;
  return {s, g - prefix[s]};
}

// Splits values into `parts` contiguous chunks of ceil(n / parts) elements;
// trailing chunks may be short or empty.
template <typename T>
std::vector<std::span<const T>> split_even(std::span<const T> values, std::size_t parts) {
  if (parts == 0) throw ContractViolation("split_even needs at least one part");
  const std::size_t chunk = (values.size() + parts - 1) / parts;
  std::vector<std::span<const T>> out;
  out.reserve(parts);
  for (std::size_t c = 0; c < parts; ++c) {
    const std::size_t first = std::min(values.size(), c * chunk);
    const std::size_t last = std::min(values.size(), first + chunk);
    out.push_back(values.subspan(first, last - first));
  }
  return out;
}

namespace detail {

template <typename Task>
void run_shards(std::size_t shards, WorkerPool* pool, Task&& task) {
  if (pool == nullptr) {
    for (std::size_t s = 0; s < shards; ++s) task(s);
  } else {
    pool->parallel_for(shards, task);
  }
}

}  // namespace detail

template <typename T, typename Allocator = std::allocator<T>>
class GrowableArray {
 public:
  using value_type = T;
  using Shard = BucketVector<T, Allocator>;

  explicit GrowableArray(std::size_t shards = kDefaultShards,
                         std::size_t first_bucket_size = kDefaultFirstBucket,
                         const Allocator& alloc = Allocator(), std::size_t max_buckets = 0) {
    if (shards == 0) throw ContractViolation("a growable array needs at least one shard");
    shards_.reserve(shards);
    for (std::size_t s = 0; s < shards; ++s) {
      shards_.push_back(std::make_unique<Shard>(first_bucket_size, alloc, max_buckets));
    }
    prefix_.assign(shards + 1, 0);
  }
  GrowableArray(const GrowableArray&) = delete;
  GrowableArray& operator=(const GrowableArray&) = delete;
  GrowableArray(GrowableArray&&) noexcept = default;
  GrowableArray& operator=(GrowableArray&&) noexcept = default;

  // Chunk c of ceil(n / S) elements goes to shard c, so global order is kept.
  static GrowableArray from_flat(std::span<const T> values, std::size_t shards,
                                 std::size_t first_bucket_size = kDefaultFirstBucket,
                                 WorkerPool* pool = nullptr) {
    GrowableArray out(shards, first_bucket_size);
    const auto chunks = split_even(values, shards);
    out.insert_parallel(chunks, Reserver(), pool);
    return out;
  }

  std::size_t shard_count() const noexcept { return shards_.size(); }
  Shard& shard(std::size_t s) { return *shards_.at(s); }
  const Shard& shard(std::size_t s) const { return *shards_.at(s); }
  std::size_t first_bucket_size() const noexcept { return shards_.front()->first_bucket_size(); }

  std::span<const std::size_t> prefix() const noexcept { return prefix_; }
  // Committed element count.
  std::size_t size() const noexcept { return prefix_.back(); }

  std::size_t capacity() const noexcept {
    std::size_t total = 0;
    for (const auto& s : shards_) total += s->capacity();
    return total;
  }

  std::uint64_t counter_operations() const noexcept {
    std::uint64_t total = 0;
    for (const auto& s : shards_) total += s->counter_operations();
    return total;
  }

  ShardPosition locate_shard(std::size_t g) const { return locate_in_prefix(prefix_, g); }

  T get_global(std::size_t g) const {
    const auto pos = locate_shard(g);
    return (*shards_[pos.shard])[pos.local];
  }

  void set_global(std::size_t g, const T& v) {
    const auto pos = locate_shard(g);
    (*shards_[pos.shard])[pos.local] = v;
  }

  // Applies op to every committed element, one task per shard. Inside a
  // shard elements are visited in ascending local order. Failures from all
  // shards are collected into one ShardErrors.
  template <typename Op>
  void for_each_shard(Op&& op, WorkerPool* pool = nullptr) {
    collect_shard_errors([&](std::size_t s) {
      shards_[s]->for_each_range(0, committed_in(s), op);
    }, pool);
  }

  // Each shard pushes its batch concurrently, then the directory is
  // rebuilt. If any shard fails nothing is committed; the exception lists
  // the shards whose batches went in.
  void insert_parallel(std::span<const std::span<const T>> batches,
                       const Reserver& reserver = Reserver(), WorkerPool* pool = nullptr) {
    if (batches.size() != shards_.size()) {
      throw ContractViolation("insert_parallel needs one batch per shard (" +
                              std::to_string(shards_.size()) + "), got " +
                              std::to_string(batches.size()));
    }
    collect_shard_errors([&](std::size_t s) { shards_[s]->push_back_batch(batches[s], reserver); },
                         pool);
    commit();
  }

  void insert_parallel(const std::vector<std::vector<T>>& batches,
                       const Reserver& reserver = Reserver(), WorkerPool* pool = nullptr) {
    std::vector<std::span<const T>> views(batches.begin(), batches.end());
    insert_parallel(std::span<const std::span<const T>>(views), reserver, pool);
  }

  void insert_parallel(const std::vector<std::span<const T>>& batches,
                       const Reserver& reserver = Reserver(), WorkerPool* pool = nullptr) {
    insert_parallel(std::span<const std::span<const T>>(batches), reserver, pool);
  }

  // Requires all inserters to be quiescent.
  void commit() {
    std::vector<std::size_t> sizes(shards_.size());
    for (std::size_t s = 0; s < shards_.size(); ++s) sizes[s] = shards_[s]->size();
    std::vector<std::size_t> scan = exclusive_scan(sizes);
    scan.push_back(shards_.empty() ? 0 : scan.back() + sizes.back());
    Shard::synchronize();
    prefix_ = std::move(scan);
  }

  // Even split: every shard reserves ceil(target / S). Returns the number
  // of buckets allocated; zero when capacity already sufficed.
  std::size_t grow(std::size_t target_total_capacity, WorkerPool* pool = nullptr) {
    const std::size_t per_shard = (target_total_capacity + shards_.size() - 1) / shards_.size();
    std::vector<std::size_t> targets(shards_.size(), per_shard);
    return grow(std::span<const std::size_t>(targets), pool);
  }

  std::size_t grow(std::span<const std::size_t> per_shard_capacity, WorkerPool* pool = nullptr) {
    if (per_shard_capacity.size() != shards_.size()) {
      throw ContractViolation("grow distribution needs one capacity per shard");
    }
    std::vector<std::size_t> made(shards_.size(), 0);
    detail::run_shards(shards_.size(), pool, [&](std::size_t s) {
      made[s] = shards_[s]->reserve(per_shard_capacity[s]);
    });
    std::size_t total = 0;
    for (auto m : made) total += m;
    return total;
  }

  std::vector<T> flatten(WorkerPool* pool = nullptr) const {
    std::vector<T> out(size());
    detail::run_shards(shards_.size(), pool, [&](std::size_t s) {
      shards_[s]->copy_out(0, std::span<T>(out).subspan(prefix_[s], committed_in(s)));
    });
    return out;
  }

  // Writes values back over the committed contents in global order
  // (inverse of flatten on the current layout).
  void store_flat(std::span<const T> values, WorkerPool* pool = nullptr) {
    if (values.size() != size()) {
      throw ContractViolation("store_flat expects exactly size() values");
    }
    detail::run_shards(shards_.size(), pool, [&](std::size_t s) {
      shards_[s]->copy_in(0, values.subspan(prefix_[s], committed_in(s)));
    });
  }

 private:
  std::size_t committed_in(std::size_t s) const noexcept { return prefix_[s + 1] - prefix_[s]; }

  template <typename Task>
  void collect_shard_errors(Task&& task, WorkerPool* pool) {
    std::vector<std::string> errors(shards_.size());
    std::vector<char> failed(shards_.size(), 0);
    detail::run_shards(shards_.size(), pool, [&](std::size_t s) {
      try {
        task(s);
      } catch (const std::exception& e) {
        failed[s] = 1;
        errors[s] = e.what();
      }
    });
    std::vector<ShardFailure> failures;
    std::vector<std::size_t> succeeded;
    for (std::size_t s = 0; s < shards_.size(); ++s) {
      if (failed[s]) {
        failures.push_back({s, std::move(errors[s])});
      } else {
        succeeded.push_back(s);
      }
    }
    if (!failures.empty()) throw ShardErrors(std::move(failures), std::move(succeeded));
  }

  std::vector<std::unique_ptr<Shard>> shards_;
  std::vector<std::size_t> prefix_;
};

}  // namespace ggarray
