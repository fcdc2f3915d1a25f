#pragma once

// BucketVector: one shard of the growable array. Elements live in a fixed
// table of buckets whose sizes double (fb, 2fb, 4fb, ...), so growing never
// moves an element and an element's address is stable for the lifetime of
// the vector.
//
// Insertion is reserve-then-allocate: a caller first reserves a contiguous
// index range on the shard's size counter, then makes sure every bucket up
// to the one holding the last reserved index exists, then writes. Exactly
// one caller allocates a given bucket; the others wait for it to be
// published.

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "ggarray/errors.hpp"
#include "ggarray/insert_index.hpp"

namespace ggarray {

struct BucketLocation {
  std::size_t bucket = 0;
  std::size_t offset = 0;

  bool operator==(const BucketLocation&) const = default;
};

// Closed-form position of local index `i` when bucket b holds fb * 2^b
// slots (fb = 2^log2_first_bucket).
constexpr BucketLocation locate_in_buckets(std::size_t i, unsigned log2_first_bucket) noexcept {
  const std::size_t q = (i >> log2_first_bucket) + 1;
  const std::size_t b = static_cast<std::size_t>(std::bit_width(q)) - 1;
  return {b, i - (((std::size_t{1} << b) - 1) << log2_first_bucket)};
}

enum class BucketOutcome { allocated, already_allocated };

inline constexpr std::size_t kDefaultFirstBucket = 32;
inline constexpr std::size_t kBucketTableSlots = 64;

// Largest bucket count whose total capacity fb * (2^k - 1) stays below 2^63.
constexpr std::size_t bucket_limit(std::size_t first_bucket_size) noexcept {
  return 63 - static_cast<std::size_t>(std::countr_zero(first_bucket_size));
}

template <typename T, typename Allocator = std::allocator<T>>
class BucketVector {
  static_assert(std::is_trivially_copyable_v<T>,
                "BucketVector stores fixed-size trivially copyable elements");

  using AllocTraits = std::allocator_traits<Allocator>;

 public:
  using value_type = T;
  using allocator_type = Allocator;

  // max_buckets = 0 selects the full table (bucket_limit(first_bucket_size)).
  explicit BucketVector(std::size_t first_bucket_size = kDefaultFirstBucket,
                        const Allocator& alloc = Allocator(), std::size_t max_buckets = 0)
      : alloc_(alloc) {
    if (first_bucket_size == 0 || !std::has_single_bit(first_bucket_size)) {
      throw ContractViolation("first bucket size must be a power of two, got " +
                              std::to_string(first_bucket_size));
    }
    log2_first_ = static_cast<unsigned>(std::countr_zero(first_bucket_size));
    const std::size_t limit = bucket_limit(first_bucket_size);
    if (max_buckets > limit) {
      throw ContractViolation("max_buckets exceeds the bucket table for this first bucket size");
    }
    max_buckets_ = max_buckets == 0 ? limit : max_buckets;
    for (auto& slot : buckets_) slot.store(nullptr, std::memory_order_relaxed);
    for (auto& flag : flags_) flag.store(false, std::memory_order_relaxed);
  }

  BucketVector(const BucketVector&) = delete;
  BucketVector& operator=(const BucketVector&) = delete;

  ~BucketVector() {
    for (std::size_t b = 0; b < max_buckets_; ++b) {
      if (T* p = buckets_[b].load(std::memory_order_acquire)) {
        AllocTraits::deallocate(alloc_, p, bucket_size_unchecked(b));
      }
    }
  }

  std::size_t first_bucket_size() const noexcept { return std::size_t{1} << log2_first_; }
  std::size_t max_buckets() const noexcept { return max_buckets_; }
  std::size_t size() const noexcept { return size_.load(); }
  std::size_t capacity() const noexcept { return capacity_.load(std::memory_order_acquire); }
  const Allocator& get_allocator() const noexcept { return alloc_; }

  // Operations issued on this shard's size counter so far.
  std::uint64_t counter_operations() const noexcept { return size_.operations(); }

  BucketLocation locate(std::size_t i) const noexcept { return locate_in_buckets(i, log2_first_); }

  std::size_t bucket_size(std::size_t b) const {
    check_bucket(b);
    return bucket_size_unchecked(b);
  }

  bool is_allocated(std::size_t b) const noexcept {
    return b < max_buckets_ && buckets_[b].load(std::memory_order_acquire) != nullptr;
  }

  std::size_t allocated_buckets() const noexcept {
    std::size_t n = 0;
    for (std::size_t b = 0; b < max_buckets_; ++b) n += is_allocated(b) ? 1 : 0;
    return n;
  }

  BucketOutcome new_bucket(std::size_t b) {
    check_bucket(b);
    for (;;) {
      if (buckets_[b].load(std::memory_order_acquire) != nullptr) {
        return BucketOutcome::already_allocated;
      }
      bool expected = false;
      if (flags_[b].compare_exchange_strong(expected, true, std::memory_order_acq_rel)) {
        const std::size_t n = bucket_size_unchecked(b);
        T* p = nullptr;
        try {
          p = AllocTraits::allocate(alloc_, n);
        } catch (...) {
          flags_[b].store(false, std::memory_order_release);
          throw;
        }
        capacity_.fetch_add(n, std::memory_order_acq_rel);
        buckets_[b].store(p, std::memory_order_release);
        return BucketOutcome::allocated;
      }
      // Lost the race: wait for the winner to publish, or retry if the
      // winner's allocation failed and the flag was rolled back.
      for (unsigned spins = 0; buckets_[b].load(std::memory_order_acquire) == nullptr; ++spins) {
        if (!flags_[b].load(std::memory_order_acquire)) break;
        if (spins > 64) std::this_thread::yield();
      }
    }
  }

  // Guarantees capacity >= min_capacity. Returns the number of buckets this
  // call allocated.
  std::size_t reserve(std::size_t min_capacity) { return ensure_buckets(min_capacity); }

  ReservedRange push_back_batch(std::span<const T> values, const Reserver& reserver = Reserver()) {
    const ReservedRange range = reserver.reserve_one(size_, values.size());
    ensure_buckets(range.end());
    write(range.start, values);
    return range;
  }

  // One reservation round where lane j inserts lanes[j]. Each lane's values
  // land at consecutive indices of its own range.
  std::vector<ReservedRange> push_back_lanes(std::span<const std::span<const T>> lanes,
                                             const Reserver& reserver = Reserver()) {
    std::vector<std::size_t> counts(lanes.size());
    std::transform(lanes.begin(), lanes.end(), counts.begin(),
                   [](std::span<const T> lane) { return lane.size(); });
    std::vector<ReservedRange> ranges = reserver.reserve(size_, counts);
    std::size_t end = 0;
    for (const auto& r : ranges) end = std::max(end, r.end());
    ensure_buckets(end);
    for (std::size_t j = 0; j < lanes.size(); ++j) write(ranges[j].start, lanes[j]);
    return ranges;
  }

  T get(std::size_t i) const { return *checked_slot(i); }
  void set(std::size_t i, const T& v) { *checked_slot(i) = v; }

  // Unchecked access; i must be below size() with its bucket allocated.
  T& operator[](std::size_t i) noexcept {
    const auto loc = locate(i);
    return buckets_[loc.bucket].load(std::memory_order_relaxed)[loc.offset];
  }
  const T& operator[](std::size_t i) const noexcept {
    const auto loc = locate(i);
    return buckets_[loc.bucket].load(std::memory_order_relaxed)[loc.offset];
  }

  // Epoch fence. Pair it with a thread rendezvous (join, barrier) before
  // reading ranges inserted in the same epoch.
  static void synchronize() noexcept { std::atomic_thread_fence(std::memory_order_seq_cst); }

  // Applies f to elements [first, last) bucket by bucket, ascending.
  template <typename F>
  void for_each_range(std::size_t first, std::size_t last, F&& f) {
    visit_chunks(first, last, [&](T* p, std::size_t n) {
      for (std::size_t k = 0; k < n; ++k) f(p[k]);
    });
  }

  template <typename F>
  void for_each(F&& f) {
    for_each_range(0, size(), std::forward<F>(f));
  }

  template <typename F>
  void for_each(F&& f) const {
    const_cast<BucketVector*>(this)->visit_chunks(0, size(), [&](const T* p, std::size_t n) {
      for (std::size_t k = 0; k < n; ++k) f(p[k]);
    });
  }

  // Copies elements [first, first + out.size()) into out.
  void copy_out(std::size_t first, std::span<T> out) const {
    std::size_t k = 0;
    const_cast<BucketVector*>(this)->visit_chunks(first, first + out.size(),
                                                  [&](const T* p, std::size_t n) {
                                                    std::copy_n(p, n, out.data() + k);
                                                    k += n;
                                                  });
  }

  // Overwrites elements [first, first + in.size()); the range must already
  // be allocated.
  void copy_in(std::size_t first, std::span<const T> in) { write(first, in); }

 private:
  std::size_t bucket_size_unchecked(std::size_t b) const noexcept {
    return std::size_t{1} << (log2_first_ + b);
  }

  void check_bucket(std::size_t b) const {
    if (b >= max_buckets_) {
      throw ContractViolation("bucket index " + std::to_string(b) + " outside table of " +
                              std::to_string(max_buckets_));
    }
  }

  std::size_t ensure_buckets(std::size_t end) {
    if (end == 0) return 0;
    const std::size_t last = locate(end - 1).bucket;
    if (last >= max_buckets_) {
      throw CapacityExhausted("shard needs bucket " + std::to_string(last) + " but only " +
                              std::to_string(max_buckets_) + " exist");
    }
    std::size_t made = 0;
    for (std::size_t b = 0; b <= last; ++b) {
      if (buckets_[b].load(std::memory_order_acquire) == nullptr &&
          new_bucket(b) == BucketOutcome::allocated) {
        ++made;
      }
    }
    return made;
  }

  T* checked_slot(std::size_t i) const {
    if (i >= size()) {
      throw OutOfBounds("index " + std::to_string(i) + " >= size " + std::to_string(size()));
    }
    const auto loc = locate(i);
    T* p = loc.bucket < max_buckets_ ? buckets_[loc.bucket].load(std::memory_order_acquire)
                                     : nullptr;
    if (p == nullptr) {
      throw OutOfBounds("index " + std::to_string(i) + " was reserved but never allocated");
    }
    return p + loc.offset;
  }

  template <typename Chunk>
  void visit_chunks(std::size_t first, std::size_t last, Chunk&& chunk) {
    std::size_t i = first;
    while (i < last) {
      const auto loc = locate(i);
      const std::size_t n = std::min(bucket_size_unchecked(loc.bucket) - loc.offset, last - i);
      chunk(buckets_[loc.bucket].load(std::memory_order_acquire) + loc.offset, n);
      i += n;
    }
  }

  void write(std::size_t first, std::span<const T> values) {
    std::size_t k = 0;
    visit_chunks(first, first + values.size(), [&](T* p, std::size_t n) {
      std::copy_n(values.data() + k, n, p);
      k += n;
    });
  }

  [[no_unique_address]] Allocator alloc_;
  unsigned log2_first_ = 0;
  std::size_t max_buckets_ = 0;
  SizeCounter size_;
  std::atomic<std::size_t> capacity_{0};
  std::array<std::atomic<T*>, kBucketTableSlots> buckets_;
  std::array<std::atomic<bool>, kBucketTableSlots> flags_;
};

}  // namespace ggarray
