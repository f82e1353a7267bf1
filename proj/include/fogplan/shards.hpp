#pragma once

#include <cstdint>
#include <vector>

#include "fogplan/dataset.hpp"

namespace fogplan {

// Disjoint index lists into a dataset, one per device (or collection point
// after regroup). moved_points[i] counts the points shard i received from
// other devices; zero for a fresh device partition.
struct ShardSet {
  std::vector<std::vector<uint32_t>> shards;
  double n0_target = 0.0;
  uint64_t seed = 0;
  std::vector<std::size_t> moved_points;

  std::size_t total_points() const {
    std::size_t n = 0;
    for (const auto& s : shards) n += s.size();
    return n;
  }

  std::size_t total_moved() const {
    std::size_t n = 0;
    for (auto m : moved_points) n += m;
    return n;
  }
};

// Device k draws Poisson(n0) points, taken sequentially from the (already
// shuffled) training set so no point lands on two devices. Throws when the
// cumulative demand exceeds the available rows.
ShardSet partition_poisson(const LabeledDataset& train, int m0, double n0, uint64_t seed);

// Number of collection points for a grouping level: round(m0/gamma), at least 1.
int feasible_m1(int m0, double gamma);

// Merges contiguous device blocks into m1 = round(m0/gamma) collection-point
// shards. The CP is the first device of its block, so that block's remaining
// points count as moved; the union of indices is preserved.
ShardSet regroup(const ShardSet& devices, double gamma);

}  // namespace fogplan
