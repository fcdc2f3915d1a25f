#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "ggarray/errors.hpp"
#include "ggarray/sharded_array.hpp"
#include "ggarray/worker_pool.hpp"
#include "test_support.hpp"

using namespace ggarray;

namespace {

std::vector<std::size_t> prefix_vec(const GrowableArray<int>& a) {
  return {a.prefix().begin(), a.prefix().end()};
}

GrowableArray<int> with_sizes(const std::vector<std::size_t>& sizes, std::size_t fb = 4) {
  GrowableArray<int> a(sizes.size(), fb);
  std::vector<std::vector<int>> batches(sizes.size());
  int next = 0;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    for (std::size_t k = 0; k < sizes[s]; ++k) batches[s].push_back(next++);
  }
  a.insert_parallel(batches);
  return a;
}

}  // namespace

TEST_CASE("prefix directory lookups") {
  const std::vector<std::size_t> prefix{0, 4, 4, 9};
  CHECK(locate_in_prefix(prefix, 0) == ShardPosition{0, 0});
  CHECK(locate_in_prefix(prefix, 4) == ShardPosition{2, 0});
  CHECK(locate_in_prefix(prefix, 8) == ShardPosition{2, 4});
  CHECK_THROWS_AS(locate_in_prefix(prefix, 9), OutOfBounds);

  const std::vector<std::size_t> single{0, 1};
  CHECK(locate_in_prefix(single, 0) == ShardPosition{0, 0});
}

TEST_CASE("prefix lookup agrees with a linear scan") {
  std::mt19937_64 rng(5);
  for (int table = 0; table < 100; ++table) {
    std::vector<std::size_t> sizes(1 + rng() % 64);
    for (auto& s : sizes) s = (rng() % 3 == 0) ? 0 : rng() % 20;
    std::vector<std::size_t> prefix(sizes.size() + 1, 0);
    std::partial_sum(sizes.begin(), sizes.end(), prefix.begin() + 1);
    for (std::size_t g = 0; g < prefix.back(); ++g) {
      const auto [s, off] = testing::linear_prefix_locate(prefix, g);
      REQUIRE(locate_in_prefix(prefix, g) == ShardPosition{s, off});
    }
  }
}

TEST_CASE("commit rebuilds the prefix") {
  auto a = with_sizes({4, 0, 5});
  CHECK(prefix_vec(a) == std::vector<std::size_t>{0, 4, 4, 9});
  a.commit();
  CHECK(prefix_vec(a) == std::vector<std::size_t>{0, 4, 4, 9});
  CHECK(a.size() == 9);

  GrowableArray<int> empty(3);
  empty.commit();
  CHECK(prefix_vec(empty) == std::vector<std::size_t>{0, 0, 0, 0});
  CHECK(empty.size() == 0);
}

TEST_CASE("uncommitted pushes stay invisible") {
  auto a = with_sizes({2, 2});
  const std::vector<int> extra{100, 101};
  a.shard(0).push_back_batch(extra);
  CHECK(a.size() == 4);
  CHECK(a.get_global(2) == 2);
  a.commit();
  CHECK(a.size() == 6);
  CHECK(a.get_global(2) == 100);
}

TEST_CASE("global get/set against a flat mirror") {
  auto a = with_sizes({3, 0, 7, 1, 12});
  std::vector<int> flat(23);
  std::iota(flat.begin(), flat.end(), 0);
  for (std::size_t g = 0; g < flat.size(); ++g) CHECK(a.get_global(g) == flat[g]);
  std::mt19937 rng(9);
  for (int op = 0; op < 1000; ++op) {
    const std::size_t g = rng() % flat.size();
    const int x = static_cast<int>(rng() % 1000);
    a.set_global(g, x);
    flat[g] = x;
  }
  CHECK(a.flatten() == flat);
  CHECK_THROWS_AS(a.get_global(a.size()), OutOfBounds);
}

TEST_CASE("for_each_shard touches every committed element once") {
  std::vector<int> values(1000);
  std::iota(values.begin(), values.end(), 0);
  auto a = GrowableArray<int>::from_flat(values, 7, 4);
  WorkerPool pool(4);
  for (int r = 0; r < 30; ++r) a.for_each_shard([](int& x) { x += 1; }, &pool);

  // Same update through the global path on a copy.
  auto b = GrowableArray<int>::from_flat(values, 7, 4);
  for (int r = 0; r < 30; ++r)
    for (std::size_t g = 0; g < b.size(); ++g) b.set_global(g, b.get_global(g) + 1);

  const auto fa = a.flatten();
  CHECK(fa == b.flatten());
  for (std::size_t g = 0; g < fa.size(); ++g) CHECK(fa[g] == values[g] + 30);
}

TEST_CASE("for_each_shard aggregates failures") {
  std::vector<int> values(40);
  std::iota(values.begin(), values.end(), 0);
  auto a = GrowableArray<int>::from_flat(values, 4, 2);  // shards hold 0-9, 10-19, ...
  try {
    a.for_each_shard([](int& x) {
      if (x == 5 || x == 35) throw std::runtime_error("bad element");
    });
    FAIL("expected ShardErrors");
  } catch (const ShardErrors& e) {
    REQUIRE(e.failures().size() == 2);
    CHECK(e.failures()[0].shard == 0);
    CHECK(e.failures()[1].shard == 3);
    CHECK(e.succeeded() == std::vector<std::size_t>{1, 2});
  }
}

TEST_CASE("insert_parallel") {
  auto a = with_sizes({1, 1, 1, 1});
  const std::vector<std::vector<int>> batches{{10, 11}, {}, {20, 21, 22}, {30}};
  a.insert_parallel(batches);
  CHECK(a.size() == 10);
  CHECK(prefix_vec(a) == std::vector<std::size_t>{0, 3, 4, 8, 10});
  CHECK(a.flatten() == std::vector<int>{0, 10, 11, 1, 2, 20, 21, 22, 3, 30});

  CHECK_THROWS_AS(a.insert_parallel(std::vector<std::vector<int>>(3)), ContractViolation);
}

TEST_CASE("duplication preserves the multiset") {
  std::vector<int> values(500);
  std::iota(values.begin(), values.end(), 0);
  auto a = GrowableArray<int>::from_flat(values, 8, 4);
  WorkerPool pool(3);
  for (int round = 0; round < 3; ++round) {
    std::vector<std::vector<int>> copies(a.shard_count());
    for (std::size_t s = 0; s < a.shard_count(); ++s) {
      copies[s].resize(a.prefix()[s + 1] - a.prefix()[s]);
      a.shard(s).copy_out(0, copies[s]);
    }
    a.insert_parallel(copies, Reserver(), &pool);
  }
  CHECK(a.size() == 4000);
  auto got = a.flatten();
  std::sort(got.begin(), got.end());
  for (std::size_t i = 0; i < got.size(); ++i) REQUIRE(got[i] == static_cast<int>(i / 8));
  CHECK(a.capacity() < 2 * a.size() + a.shard_count() * a.first_bucket_size());
}

TEST_CASE("failed shard insert commits nothing") {
  GrowableArray<int> a(3, 2, {}, 2);  // each shard holds at most 6
  const std::vector<std::vector<int>> batches{{1, 2}, std::vector<int>(7, 9), {3}};
  try {
    a.insert_parallel(batches);
    FAIL("expected ShardErrors");
  } catch (const ShardErrors& e) {
    REQUIRE(e.failures().size() == 1);
    CHECK(e.failures()[0].shard == 1);
    CHECK(e.succeeded() == std::vector<std::size_t>{0, 2});
  }
  CHECK(a.size() == 0);
}

TEST_CASE("grow") {
  SUBCASE("even split") {
    GrowableArray<int> a(32, 32);
    a.grow(1'000'000);
    for (std::size_t s = 0; s < 32; ++s) CHECK(a.shard(s).capacity() >= 31'250);
    CHECK(a.grow(a.capacity()) == 0);
  }
  SUBCASE("overshoot makes the next grow free") {
    GrowableArray<int> a(1, 32);
    CHECK(a.grow(100) == 3);
    CHECK(a.capacity() == 224);
    CHECK(a.grow(200) == 0);
    CHECK(a.grow(225) == 1);
  }
  SUBCASE("per-shard targets") {
    GrowableArray<int> a(2, 4);
    const std::vector<std::size_t> targets{4, 13};
    CHECK(a.grow(targets) == 1 + 3);
    CHECK(a.shard(0).capacity() == 4);
    CHECK(a.shard(1).capacity() == 28);
    CHECK_THROWS_AS(a.grow(std::vector<std::size_t>{1}), ContractViolation);
  }
}

TEST_CASE("flatten, from_flat and store_flat") {
  auto a = with_sizes({4, 0, 5});
  CHECK(a.flatten() == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8});

  GrowableArray<int> empty(4);
  CHECK(empty.flatten().empty());

  std::mt19937 rng(1);
  for (std::size_t n : {0u, 1u, 31u, 1000u}) {
    for (std::size_t shards : {1u, 3u, 32u}) {
      std::vector<int> v(n);
      for (auto& x : v) x = static_cast<int>(rng());
      auto g = GrowableArray<int>::from_flat(v, shards, 2);
      CHECK(g.flatten() == v);
      std::vector<int> w(v.rbegin(), v.rend());
      g.store_flat(w);
      CHECK(g.flatten() == w);
    }
  }
  CHECK_THROWS_AS(a.store_flat(std::vector<int>(3)), ContractViolation);
}
