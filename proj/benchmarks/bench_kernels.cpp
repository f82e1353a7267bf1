// Compares the block-reduced OpenMP kernels against the straight serial
// reference, plus one end-to-end DSVRG round at desk scale.

#include <benchmark/benchmark.h>

#include <vector>

#include "fogplan/dsvrg.hpp"
#include "fogplan/kernels.hpp"
#include "fogplan/rng.hpp"

using namespace fogplan;

namespace {

LabeledDataset make_data(int rows, int d, uint64_t seed) {
  LabeledDataset ds;
  ds.d = d;
  Rng rng(seed);
  std::vector<double> x(d);
  for (int i = 0; i < rows; ++i) {
    for (auto& v : x) v = rng.normal();
    ds.append_row(x, 3, rng.uniform01() < 0.5 ? int8_t{1} : int8_t{-1});
  }
  return ds;
}

std::vector<uint32_t> all_rows(int rows) {
  std::vector<uint32_t> idx(rows);
  for (int i = 0; i < rows; ++i) idx[i] = i;
  return idx;
}

void bm_gradient_parallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LabeledDataset ds = make_data(n, 54, 1);
  const auto idx = all_rows(n);
  const ShardView shard{&ds, idx};
  std::vector<double> w(54, 0.1), grad(54);
  for (auto _ : state) {
    uint64_t evals = 0;
    logistic_gradient(shard, w, 1e-4, grad, evals);
    benchmark::DoNotOptimize(grad.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void bm_gradient_serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LabeledDataset ds = make_data(n, 54, 1);
  const auto idx = all_rows(n);
  const ShardView shard{&ds, idx};
  std::vector<double> w(54, 0.1), grad(54);
  for (auto _ : state) {
    uint64_t evals = 0;
    reference::logistic_gradient(shard, w, 1e-4, grad, evals);
    benchmark::DoNotOptimize(grad.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void bm_dsvrg_round(benchmark::State& state) {
  const int m1 = static_cast<int>(state.range(0));
  const int rows = 5000;
  const LabeledDataset ds = make_data(rows, 54, 2);
  ShardSet cps;
  cps.shards.resize(m1);
  cps.moved_points.assign(m1, 0);
  for (int i = 0; i < rows; ++i) cps.shards[i % m1].push_back(i);
  LearnerConfig cfg;
  cfg.epsilon = 1e-300;  // never stops; exactly max_rounds rounds
  cfg.max_rounds = 1;
  cfg.omega = 54;
  cfg.tau = 54;
  for (auto _ : state) {
    const TrainingTrace t = run_dsvrg(ds, cps, cfg, 1);
    benchmark::DoNotOptimize(t.rounds);
  }
}

}  // namespace

BENCHMARK(bm_gradient_serial)->Arg(1 << 12)->Arg(1 << 15)->Arg(1 << 17);
BENCHMARK(bm_gradient_parallel)->Arg(1 << 12)->Arg(1 << 15)->Arg(1 << 17);
BENCHMARK(bm_dsvrg_round)->Arg(1)->Arg(10)->Arg(50);

BENCHMARK_MAIN();
