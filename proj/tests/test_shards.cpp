#include <doctest.h>

#include <algorithm>
#include <set>

#include "fogplan/rng.hpp"
#include "fogplan/shards.hpp"

using namespace fogplan;

namespace {

LabeledDataset rows_only(int rows) {
  LabeledDataset ds;
  ds.d = 1;
  for (int i = 0; i < rows; ++i) {
    const double x = i;
    ds.append_row(std::span<const double>(&x, 1), 3, 1);
  }
  return ds;
}

ShardSet with_sizes(std::initializer_list<std::size_t> sizes) {
  ShardSet s;
  uint32_t next = 0;
  for (std::size_t n : sizes) {
    std::vector<uint32_t> shard;
    for (std::size_t i = 0; i < n; ++i) shard.push_back(next++);
    s.shards.push_back(std::move(shard));
  }
  s.moved_points.assign(s.shards.size(), 0);
  return s;
}

void check_disjoint(const ShardSet& s) {
  std::set<uint32_t> seen;
  std::size_t total = 0;
  for (const auto& shard : s.shards) {
    for (uint32_t i : shard) seen.insert(i);
    total += shard.size();
  }
  CHECK(seen.size() == total);
}

}  // namespace

TEST_CASE("partition_poisson basics") {
  const LabeledDataset train = rows_only(2000);

  SUBCASE("m0 = 1 gives a single shard of Poisson size") {
    const ShardSet s = partition_poisson(train, 1, 50, 7);
    CHECK(s.shards.size() == 1);
    CHECK(s.shards[0].size() > 20);
    CHECK(s.shards[0].size() < 100);
  }

  SUBCASE("deterministic in the seed") {
    const ShardSet a = partition_poisson(train, 10, 30, 5);
    const ShardSet b = partition_poisson(train, 10, 30, 5);
    const ShardSet c = partition_poisson(train, 10, 30, 6);
    CHECK(a.shards == b.shards);
    CHECK(a.shards != c.shards);
  }

  SUBCASE("disjoint by construction") {
    const ShardSet s = partition_poisson(train, 20, 40, 9);
    check_disjoint(s);
  }

  SUBCASE("demand beyond the training set is an error") {
    const LabeledDataset small = rows_only(360);
    CHECK_THROWS_WITH_AS(partition_poisson(small, 400, 112, 1),
                         doctest::Contains("lower m0*n0"), Error);
  }

  SUBCASE("argument validation") {
    CHECK_THROWS_AS(partition_poisson(train, 0, 10, 1), Error);
    CHECK_THROWS_AS(partition_poisson(train, 1, 0.5, 1), Error);
  }
}

TEST_CASE("mean shard size converges to n0") {
  const LabeledDataset train = rows_only(60000);
  const ShardSet s = partition_poisson(train, 1000, 50, 123);
  const double mean = static_cast<double>(s.total_points()) / 1000.0;
  CHECK(mean == doctest::Approx(50.0).epsilon(0.05));
}

TEST_CASE("feasible_m1 rounds and clamps") {
  CHECK(feasible_m1(400, 1.0) == 400);
  CHECK(feasible_m1(400, 400.0) == 1);
  CHECK(feasible_m1(400, 3.0) == 133);
  CHECK(feasible_m1(10, 10.0) == 1);
  CHECK(feasible_m1(10, 6.9) == 1);  // round(10/6.9) = 1
}

TEST_CASE("regroup endpoints") {
  const LabeledDataset train = rows_only(3000);
  const ShardSet devices = partition_poisson(train, 12, 40, 3);

  SUBCASE("gamma = 1 is the identity with zero moved volume") {
    const ShardSet s = regroup(devices, 1.0);
    CHECK(s.shards == devices.shards);
    CHECK(s.total_moved() == 0);
  }

  SUBCASE("gamma = m0 centralises everything") {
    const ShardSet s = regroup(devices, 12.0);
    CHECK(s.shards.size() == 1);
    CHECK(s.shards[0].size() == devices.total_points());
    CHECK(s.total_moved() == devices.total_points() - devices.shards[0].size());
  }

  SUBCASE("multiset of indices is preserved") {
    for (double gamma : {1.0, 2.0, 3.0, 4.0, 6.0, 12.0}) {
      const ShardSet s = regroup(devices, gamma);
      check_disjoint(s);
      CHECK(s.total_points() == devices.total_points());
      std::vector<uint32_t> all_dev, all_cp;
      for (const auto& sh : devices.shards) all_dev.insert(all_dev.end(), sh.begin(), sh.end());
      for (const auto& sh : s.shards) all_cp.insert(all_cp.end(), sh.begin(), sh.end());
      std::sort(all_dev.begin(), all_dev.end());
      std::sort(all_cp.begin(), all_cp.end());
      CHECK(all_dev == all_cp);
    }
  }
}

TEST_CASE("regroup blocks sizes (3,5,2,6) at gamma 2") {
  const ShardSet devices = with_sizes({3, 5, 2, 6});
  const ShardSet s = regroup(devices, 2.0);
  REQUIRE(s.shards.size() == 2);
  CHECK(s.shards[0].size() == 8);
  CHECK(s.shards[1].size() == 8);
  CHECK(s.moved_points[0] == 5);  // device 1 into CP hosted by device 0
  CHECK(s.moved_points[1] == 6);  // device 3 into CP hosted by device 2
  CHECK(s.total_moved() == 11);
}

TEST_CASE("regroup rejects gamma outside [1, m0]") {
  const ShardSet devices = with_sizes({2, 2});
  CHECK_THROWS_AS(regroup(devices, 0.5), Error);
  CHECK_THROWS_AS(regroup(devices, 3.0), Error);
}
