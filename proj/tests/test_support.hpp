#pragma once

// Oracles and instrumented allocators shared by the unit and acceptance
// tests. Nothing here calls into the code paths it is used to check.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <new>
#include <utility>
#include <vector>

namespace ggarray::testing {

// Walks buckets of size fb, 2fb, 4fb, ... accumulating capacity.
inline std::pair<std::size_t, std::size_t> brute_force_locate(std::size_t i, std::size_t fb) {
  std::size_t bucket = 0;
  std::size_t start = 0;
  std::size_t size = fb;
  while (i >= start + size) {
    start += size;
    size *= 2;
    ++bucket;
  }
  return {bucket, i - start};
}

// First shard s with prefix[s] <= g < prefix[s + 1], scanning linearly.
inline std::pair<std::size_t, std::size_t> linear_prefix_locate(
    const std::vector<std::size_t>& prefix, std::size_t g) {
  for (std::size_t s = 0; s + 1 < prefix.size(); ++s) {
    if (prefix[s] <= g && g < prefix[s + 1]) return {s, g - prefix[s]};
  }
  return {prefix.size(), 0};
}

// out[j] = counts[0] + ... + counts[j-1], each prefix summed from scratch.
inline std::vector<std::size_t> naive_exclusive_scan(const std::vector<std::size_t>& counts) {
  std::vector<std::size_t> out(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    std::size_t sum = 0;
    for (std::size_t k = 0; k < j; ++k) sum += counts[k];
    out[j] = sum;
  }
  return out;
}

// Smallest fb * (2^k - 1) >= n, found by enumeration.
inline std::size_t minimal_bucket_capacity(std::size_t n, std::size_t fb) {
  std::size_t cap = 0;
  std::size_t bucket = fb;
  while (cap < n) {
    cap += bucket;
    bucket *= 2;
  }
  return cap;
}

struct AllocationLog {
  std::atomic<std::size_t> allocations{0};
  std::atomic<std::size_t> deallocations{0};
  std::atomic<std::size_t> elements{0};
  // When > 0, the next `fail_next` allocations throw std::bad_alloc.
  std::atomic<int> fail_next{0};
};

template <typename T>
class CountingAllocator {
 public:
  using value_type = T;

  explicit CountingAllocator(AllocationLog* log) noexcept : log_(log) {}
  template <typename U>
  CountingAllocator(const CountingAllocator<U>& other) noexcept : log_(other.log()) {}

  T* allocate(std::size_t n) {
    if (log_->fail_next.load() > 0) {
      log_->fail_next.fetch_sub(1);
      throw std::bad_alloc();
    }
    log_->allocations.fetch_add(1);
    log_->elements.fetch_add(n);
    return std::allocator<T>().allocate(n);
  }

  void deallocate(T* p, std::size_t n) noexcept {
    log_->deallocations.fetch_add(1);
    std::allocator<T>().deallocate(p, n);
  }

  AllocationLog* log() const noexcept { return log_; }

  template <typename U>
  bool operator==(const CountingAllocator<U>& other) const noexcept {
    return log_ == other.log();
  }

 private:
  AllocationLog* log_;
};

}  // namespace ggarray::testing
