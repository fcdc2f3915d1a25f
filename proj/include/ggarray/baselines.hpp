#pragma once

// Comparison structures:
//   StaticArray      - storage fixed at construction, never grows.
//   DoublingArray    - contiguous storage, stop-the-world resize that copies
//                      every element into a buffer of twice the capacity.
//   ChunkTableArray  - contiguous indexing over a table of equal chunks;
//                      resize appends chunks and never copies (the CPU
//                      stand-in for virtual-memory remapping).
//
// All three share the insert path of the growable array: reserve a range on
// an atomic size counter, then write. Inserts may run concurrently; resizes
// need exclusive access.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "ggarray/errors.hpp"
#include "ggarray/insert_index.hpp"

namespace ggarray {

inline constexpr std::size_t kDefaultChunkSize = std::size_t{1} << 16;

namespace detail {

// Reserves one range per lane and fails with CapacityExhausted if any range
// ends past `capacity`. On failure the round is rolled back as far as no
// later reservation prevents it.
inline void reserve_bounded(SizeCounter& counter, const Reserver& reserver,
                            std::span<const std::size_t> counts, std::size_t capacity,
                            std::span<ReservedRange> out) {
  reserver.reserve_into(counter, counts, out);
  std::size_t end = 0;
  for (const auto& r : out) end = std::max(end, r.end());
  if (end <= capacity) return;
  for (auto it = out.rbegin(); it != out.rend(); ++it) {
    if (it->count != 0 && !counter.try_rollback(*it)) break;
  }
  throw CapacityExhausted("insert needs " + std::to_string(end) + " slots, capacity is " +
                          std::to_string(capacity));
}

inline void check_index(std::size_t i, std::size_t size) {
  if (i >= size) {
    throw OutOfBounds("index " + std::to_string(i) + " >= size " + std::to_string(size));
  }
}

}  // namespace detail

template <typename T, typename Allocator = std::allocator<T>>
class StaticArray {
  static_assert(std::is_trivially_copyable_v<T>);
  using AllocTraits = std::allocator_traits<Allocator>;

 public:
  using value_type = T;

  explicit StaticArray(std::size_t capacity, const Allocator& alloc = Allocator())
      : alloc_(alloc), capacity_(capacity) {
    if (capacity_ > 0) {
      data_ = AllocTraits::allocate(alloc_, capacity_);
      std::fill_n(data_, capacity_, T{});
    }
  }
  StaticArray(const StaticArray&) = delete;
  StaticArray& operator=(const StaticArray&) = delete;
  ~StaticArray() {
    if (data_ != nullptr) AllocTraits::deallocate(alloc_, data_, capacity_);
  }

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return std::min(size_.load(), capacity_); }
  std::uint64_t counter_operations() const noexcept { return size_.operations(); }
  std::uint64_t copies() const noexcept { return 0; }

  // A static array cannot grow; succeeds only when capacity already suffices.
  std::size_t resize(std::size_t min_capacity) const {
    if (min_capacity > capacity_) {
      throw CapacityExhausted("static array cannot grow past " + std::to_string(capacity_));
    }
    return 0;
  }

  void reserve_lanes(std::span<const std::size_t> counts, const Reserver& reserver,
                     std::span<ReservedRange> out) {
    detail::reserve_bounded(size_, reserver, counts, capacity_, out);
  }

  void write(std::size_t start, std::span<const T> values) noexcept {
    std::copy(values.begin(), values.end(), data_ + start);
  }

  ReservedRange insert_batch(std::span<const T> values, const Reserver& reserver = Reserver()) {
    const std::size_t count = values.size();
    ReservedRange range;
    reserve_lanes(std::span<const std::size_t>(&count, 1), reserver,
                  std::span<ReservedRange>(&range, 1));
    write(range.start, values);
    return range;
  }

  T get(std::size_t i) const {
    detail::check_index(i, size());
    return data_[i];
  }
  void set(std::size_t i, const T& v) {
    detail::check_index(i, size());
    data_[i] = v;
  }
  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<T> view() noexcept { return {data_, size()}; }
  std::span<const T> view() const noexcept { return {data_, size()}; }
  std::vector<T> to_vector() const { return {data_, data_ + size()}; }

 private:
  [[no_unique_address]] Allocator alloc_;
  T* data_ = nullptr;
  std::size_t capacity_;
  SizeCounter size_;
};

template <typename T, typename Allocator = std::allocator<T>>
class DoublingArray {
  static_assert(std::is_trivially_copyable_v<T>);
  using AllocTraits = std::allocator_traits<Allocator>;

 public:
  using value_type = T;

  explicit DoublingArray(std::size_t initial_capacity = 1, const Allocator& alloc = Allocator())
      : alloc_(alloc), initial_(initial_capacity) {
    if (initial_ == 0) throw ContractViolation("doubling array needs a non-zero initial capacity");
    capacity_ = initial_;
    data_ = AllocTraits::allocate(alloc_, capacity_);
  }
  DoublingArray(const DoublingArray&) = delete;
  DoublingArray& operator=(const DoublingArray&) = delete;
  ~DoublingArray() { AllocTraits::deallocate(alloc_, data_, capacity_); }

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return std::min(size_.load(), capacity_); }
  std::uint64_t counter_operations() const noexcept { return size_.operations(); }
  // Elements copied by resizes so far.
  std::uint64_t copies() const noexcept { return copies_; }

  // Stop-the-world: doubles until capacity >= min_capacity and moves every
  // element to the new buffer. Returns the number of elements copied.
  std::size_t resize(std::size_t min_capacity) {
    if (min_capacity <= capacity_) return 0;
    std::size_t next = capacity_;
    while (next < min_capacity) next *= 2;
    T* fresh = AllocTraits::allocate(alloc_, next);
    const std::size_t n = size();
    std::copy_n(data_, n, fresh);
    AllocTraits::deallocate(alloc_, data_, capacity_);
    data_ = fresh;
    capacity_ = next;
    copies_ += n;
    return n;
  }

  // Sequential append with automatic doubling.
  void push_back(const T& v) {
    if (size() == capacity_) resize(capacity_ + 1);
    insert_batch(std::span<const T>(&v, 1));
  }

  void reserve_lanes(std::span<const std::size_t> counts, const Reserver& reserver,
                     std::span<ReservedRange> out) {
    detail::reserve_bounded(size_, reserver, counts, capacity_, out);
  }

  void write(std::size_t start, std::span<const T> values) noexcept {
    std::copy(values.begin(), values.end(), data_ + start);
  }

  ReservedRange insert_batch(std::span<const T> values, const Reserver& reserver = Reserver()) {
    const std::size_t count = values.size();
    ReservedRange range;
    reserve_lanes(std::span<const std::size_t>(&count, 1), reserver,
                  std::span<ReservedRange>(&range, 1));
    write(range.start, values);
    return range;
  }

  T get(std::size_t i) const {
    detail::check_index(i, size());
    return data_[i];
  }
  void set(std::size_t i, const T& v) {
    detail::check_index(i, size());
    data_[i] = v;
  }
  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<T> view() noexcept { return {data_, size()}; }
  std::span<const T> view() const noexcept { return {data_, size()}; }
  std::vector<T> to_vector() const { return {data_, data_ + size()}; }

 private:
  [[no_unique_address]] Allocator alloc_;
  std::size_t initial_;
  std::size_t capacity_ = 0;
  T* data_ = nullptr;
  SizeCounter size_;
  std::uint64_t copies_ = 0;
};

template <typename T, typename Allocator = std::allocator<T>>
class ChunkTableArray {
  static_assert(std::is_trivially_copyable_v<T>);
  using AllocTraits = std::allocator_traits<Allocator>;

 public:
  using value_type = T;

  explicit ChunkTableArray(std::size_t chunk_size = kDefaultChunkSize,
                           const Allocator& alloc = Allocator())
      : alloc_(alloc), chunk_size_(chunk_size) {
    if (chunk_size_ == 0 || !std::has_single_bit(chunk_size_)) {
      throw ContractViolation("chunk size must be a power of two");
    }
    log2_chunk_ = static_cast<unsigned>(std::countr_zero(chunk_size_));
  }
  ChunkTableArray(const ChunkTableArray&) = delete;
  ChunkTableArray& operator=(const ChunkTableArray&) = delete;
  ~ChunkTableArray() {
    for (T* c : chunks_) AllocTraits::deallocate(alloc_, c, chunk_size_);
  }

  std::size_t chunk_size() const noexcept { return chunk_size_; }
  std::size_t chunk_count() const noexcept { return chunks_.size(); }
  std::size_t capacity() const noexcept { return chunks_.size() * chunk_size_; }
  std::size_t size() const noexcept { return std::min(size_.load(), capacity()); }
  std::uint64_t counter_operations() const noexcept { return size_.operations(); }
  // Resizes here never copy; kept for a uniform surface with DoublingArray.
  std::uint64_t copies() const noexcept { return copies_; }

  // Appends chunks until capacity >= min_capacity. Returns elements copied,
  // which is always zero.
  std::size_t resize(std::size_t min_capacity) {
    while (capacity() < min_capacity) chunks_.push_back(AllocTraits::allocate(alloc_, chunk_size_));
    return 0;
  }

  void reserve_lanes(std::span<const std::size_t> counts, const Reserver& reserver,
                     std::span<ReservedRange> out) {
    detail::reserve_bounded(size_, reserver, counts, capacity(), out);
  }

  void write(std::size_t start, std::span<const T> values) noexcept {
    std::size_t k = 0;
    visit_chunks(start, start + values.size(), [&](T* p, std::size_t n) {
      std::copy_n(values.data() + k, n, p);
      k += n;
    });
  }

  ReservedRange insert_batch(std::span<const T> values, const Reserver& reserver = Reserver()) {
    const std::size_t count = values.size();
    ReservedRange range;
    reserve_lanes(std::span<const std::size_t>(&count, 1), reserver,
                  std::span<ReservedRange>(&range, 1));
    write(range.start, values);
    return range;
  }

  T get(std::size_t i) const {
    detail::check_index(i, size());
    return (*this)[i];
  }
  void set(std::size_t i, const T& v) {
    detail::check_index(i, size());
    (*this)[i] = v;
  }
  T& operator[](std::size_t i) noexcept {
    return chunks_[i >> log2_chunk_][i & (chunk_size_ - 1)];
  }
  const T& operator[](std::size_t i) const noexcept {
    return chunks_[i >> log2_chunk_][i & (chunk_size_ - 1)];
  }

  // Applies f to elements [first, last) chunk by chunk.
  template <typename F>
  void for_each_range(std::size_t first, std::size_t last, F&& f) {
    visit_chunks(first, last, [&](T* p, std::size_t n) {
      for (std::size_t k = 0; k < n; ++k) f(p[k]);
    });
  }

  std::vector<T> to_vector() const {
    std::vector<T> out(size());
    std::size_t k = 0;
    const_cast<ChunkTableArray*>(this)->visit_chunks(0, out.size(), [&](const T* p, std::size_t n) {
      std::copy_n(p, n, out.data() + k);
      k += n;
    });
    return out;
  }

 private:
  template <typename Chunk>
  void visit_chunks(std::size_t first, std::size_t last, Chunk&& chunk) {
    std::size_t i = first;
    while (i < last) {
      const std::size_t off = i & (chunk_size_ - 1);
      const std::size_t n = std::min(chunk_size_ - off, last - i);
      chunk(chunks_[i >> log2_chunk_] + off, n);
      i += n;
    }
  }

  [[no_unique_address]] Allocator alloc_;
  std::size_t chunk_size_;
  unsigned log2_chunk_ = 0;
  std::vector<T*> chunks_;
  SizeCounter size_;
  std::uint64_t copies_ = 0;
};

}  // namespace ggarray
