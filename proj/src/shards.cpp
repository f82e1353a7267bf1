#include "fogplan/shards.hpp"

#include <cmath>
#include <string>

#include "fogplan/rng.hpp"

namespace fogplan {

ShardSet partition_poisson(const LabeledDataset& train, int m0, double n0, uint64_t seed) {
  if (m0 < 1) throw Error("partition_poisson: m0 must be >= 1");
  if (n0 < 1) throw Error("partition_poisson: n0 must be >= 1");

  ShardSet set;
  set.n0_target = n0;
  set.seed = seed;
  set.shards.resize(m0);
  set.moved_points.assign(m0, 0);

  Rng rng(seed);
  std::size_t cursor = 0;
  for (int k = 0; k < m0; ++k) {
    const std::size_t want = static_cast<std::size_t>(rng.poisson(n0));
    if (cursor + want > train.rows()) {
      throw Error("partition demand exceeds training data (" +
                  std::to_string(cursor + want) + " > " + std::to_string(train.rows()) +
                  " rows after device " + std::to_string(k) +
                  "): lower m0*n0 or provide more data");
    }
    auto& shard = set.shards[k];
    shard.reserve(want);
    for (std::size_t i = 0; i < want; ++i) shard.push_back(static_cast<uint32_t>(cursor++));
  }
  return set;
}

int feasible_m1(int m0, double gamma) {
  const int m1 = static_cast<int>(std::lround(static_cast<double>(m0) / gamma));
  return m1 < 1 ? 1 : (m1 > m0 ? m0 : m1);
}

ShardSet regroup(const ShardSet& devices, double gamma) {
  const int m0 = static_cast<int>(devices.shards.size());
  if (!(gamma >= 1.0 && gamma <= static_cast<double>(m0))) {
    throw Error("regroup: gamma must be in [1, m0]");
  }
  const int m1 = feasible_m1(m0, gamma);

  ShardSet out;
  out.n0_target = devices.n0_target;
  out.seed = devices.seed;
  out.shards.resize(m1);
  out.moved_points.assign(m1, 0);

  // CP i hosts the contiguous device block [i*m0/m1, (i+1)*m0/m1); the host is
  // the block's first device, so only the other devices' points count as moved.
  for (int i = 0; i < m1; ++i) {
    const int begin = static_cast<int>((static_cast<long>(i) * m0) / m1);
    const int end = static_cast<int>((static_cast<long>(i) + 1) * m0 / m1);
    auto& cp = out.shards[i];
    std::size_t own = 0;
    for (int k = begin; k < end; ++k) {
      const auto& dev = devices.shards[k];
      if (k == begin) own = dev.size();
      cp.insert(cp.end(), dev.begin(), dev.end());
    }
    out.moved_points[i] = cp.size() - own;
  }
  return out;
}

}  // namespace fogplan
