#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <vector>

#include "fogplan/dsvrg.hpp"
#include "fogplan/rng.hpp"

using namespace fogplan;

namespace {

// linearly-signalled binary data with label noise, integer-free but
// standardised-scale features
LabeledDataset noisy_linear(int rows, int d, uint64_t seed, double flip = 0.1) {
  LabeledDataset ds;
  ds.d = d;
  Rng rng(seed);
  std::vector<double> x(d), w(d);
  for (auto& v : w) v = rng.normal();
  for (int i = 0; i < rows; ++i) {
    double z = 0;
    for (int j = 0; j < d; ++j) {
      x[j] = rng.normal();
      z += x[j] * w[j];
    }
    int8_t y = z >= 0 ? 1 : -1;
    if (rng.uniform01() < flip) y = -y;
    ds.append_row(x, y > 0 ? 3 : 7, y);
  }
  return ds;
}

ShardSet equal_shards(std::size_t rows, int m1) {
  ShardSet s;
  s.shards.resize(m1);
  s.moved_points.assign(m1, 0);
  const std::size_t per = rows / m1;
  uint32_t next = 0;
  for (int k = 0; k < m1; ++k) {
    for (std::size_t i = 0; i < per; ++i) s.shards[k].push_back(next++);
  }
  return s;
}

LearnerConfig desk_cfg(int omega) {
  LearnerConfig cfg;
  cfg.lambda = 1e-4;
  cfg.eta = 0.5;
  cfg.epsilon = 1e-2;
  cfg.max_rounds = 500;
  cfg.tau = omega;
  cfg.omega = omega;
  return cfg;
}

}  // namespace

TEST_CASE("local_update with w_k = w_global reduces to a plain gradient step") {
  std::vector<double> w_k{0.3, -0.2};
  const std::vector<double> w_g{0.3, -0.2};
  const std::vector<double> h{0.5, 0.25};
  const std::vector<double> x{1.0, 2.0};
  local_update(w_k, w_g, h, x, 1.0, 0.1, 0.0);
  CHECK(w_k[0] == doctest::Approx(0.3 - 0.1 * 0.5).epsilon(1e-15));
  CHECK(w_k[1] == doctest::Approx(-0.2 - 0.1 * 0.25).epsilon(1e-15));
}

TEST_CASE("local_update with eta = 0 leaves the weights alone") {
  std::vector<double> w_k{1.0, 2.0};
  const std::vector<double> w_g{0.0, 0.0};
  const std::vector<double> h{5.0, -5.0};
  const std::vector<double> x{1.0, 1.0};
  local_update(w_k, w_g, h, x, -1.0, 0.0, 0.3);
  CHECK(w_k[0] == 1.0);
  CHECK(w_k[1] == 2.0);
}

TEST_CASE("local_update matches a scalar evaluation of the update rule") {
  const std::vector<double> x{1.0, 2.0};
  const std::vector<double> w_g{0.3, 0.4};
  const std::vector<double> h{0.05, -0.1};

  SUBCASE("without regularisation") {
    std::vector<double> w_k{0.1, -0.2};
    local_update(w_k, w_g, h, x, 1.0, 0.1, 0.0);
    CHECK(w_k[0] == doctest::Approx(0.12747026224067767).epsilon(1e-14));
    CHECK(w_k[1] == doctest::Approx(-0.12505947551864466).epsilon(1e-14));
  }
  SUBCASE("with the per-sample regulariser term") {
    std::vector<double> w_k{0.1, -0.2};
    local_update(w_k, w_g, h, x, 1.0, 0.1, 0.2);
    CHECK(w_k[0] == doctest::Approx(0.13147026224067768).epsilon(1e-14));
    CHECK(w_k[1] == doctest::Approx(-0.11305947551864466).epsilon(1e-14));
  }
}

TEST_CASE("global_update follows the running average") {
  SUBCASE("t = 0 returns the new weights") {
    std::vector<double> wg{9.0};
    const std::vector<double> wn{2.0};
    global_update(wn, wg, 0);
    CHECK(wg[0] == 2.0);
  }
  SUBCASE("t = 1 is the midpoint") {
    std::vector<double> wg{0.0};
    const std::vector<double> wn{2.0};
    global_update(wn, wg, 1);
    CHECK(wg[0] == 1.0);
  }
  SUBCASE("t = 3 weights the old value three times") {
    std::vector<double> wg{8.0};
    const std::vector<double> wn{4.0};
    global_update(wn, wg, 3);
    CHECK(wg[0] == 7.0);
  }
}

TEST_CASE("single collection point sends no messages") {
  const LabeledDataset ds = noisy_linear(200, 4, 11);
  const ShardSet cps = equal_shards(200, 1);
  const TrainingTrace trace = run_dsvrg(ds, cps, desk_cfg(4), 1);
  CHECK(trace.messages == 0);
  CHECK(trace.converged);
  CHECK(trace.grad_norm_history.back() <= 1e-2);
}

TEST_CASE("per-round accounting on equal shards is exact") {
  // m1 = 400 CPs of 2 points each, omega = 54: each round must cost
  // 2*399*54 = 43092 message units and n1(m1+1) = 2*401 = 802 evaluations
  const LabeledDataset ds = noisy_linear(800, 54, 13);
  const ShardSet cps = equal_shards(800, 400);
  LearnerConfig cfg = desk_cfg(54);
  cfg.epsilon = 1e-12;  // force the round cap
  cfg.eta = 0.05;
  cfg.max_rounds = 3;
  const TrainingTrace trace = run_dsvrg(ds, cps, cfg, 7);
  CHECK_FALSE(trace.converged);
  CHECK(trace.rounds == 3);
  CHECK(trace.messages == 3ull * 43092);
  CHECK(trace.gradient_evals == 3ull * 802);
  CHECK(trace.flops == 3.0 * 802 * 54);
  CHECK(trace.grad_norm_history.size() == 3);
}

TEST_CASE("trace counters are deterministic in (shards, cfg, seed)") {
  const LabeledDataset ds = noisy_linear(600, 6, 17);
  const ShardSet cps = equal_shards(600, 12);
  const LearnerConfig cfg = desk_cfg(6);
  const TrainingTrace a = run_dsvrg(ds, cps, cfg, 5);
  const TrainingTrace b = run_dsvrg(ds, cps, cfg, 5);
  CHECK(a.rounds == b.rounds);
  CHECK(a.messages == b.messages);
  CHECK(a.gradient_evals == b.gradient_evals);
  CHECK(a.grad_norm_history == b.grad_norm_history);  // bitwise

  // a different seed starts the rotation elsewhere
  const TrainingTrace c = run_dsvrg(ds, cps, cfg, 6);
  CHECK(c.rounds >= 1);
}

#ifdef _OPENMP
TEST_CASE("trace is identical for any thread count") {
  const LabeledDataset ds = noisy_linear(2048, 8, 19);
  const ShardSet cps = equal_shards(2048, 8);
  const LearnerConfig cfg = desk_cfg(8);

  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const TrainingTrace a = run_dsvrg(ds, cps, cfg, 3);
  omp_set_num_threads(saved > 1 ? saved : 4);
  const TrainingTrace b = run_dsvrg(ds, cps, cfg, 3);
  omp_set_num_threads(saved);

  CHECK(a.rounds == b.rounds);
  CHECK(a.grad_norm_history == b.grad_norm_history);
}
#endif

TEST_CASE("convergence flag implies the last squared norm is under epsilon") {
  const LabeledDataset ds = noisy_linear(400, 5, 23);
  const ShardSet cps = equal_shards(400, 4);
  LearnerConfig cfg = desk_cfg(5);
  cfg.epsilon = 5e-3;
  const TrainingTrace trace = run_dsvrg(ds, cps, cfg, 2);
  REQUIRE(trace.converged);
  CHECK(trace.grad_norm_history.back() <= cfg.epsilon);
  CHECK(trace.rounds == static_cast<int>(trace.grad_norm_history.size()));
}

TEST_CASE("a wild step size raises DivergenceError with the partial trace") {
  const LabeledDataset ds = noisy_linear(300, 4, 29);
  const ShardSet cps = equal_shards(300, 3);
  LearnerConfig cfg = desk_cfg(4);
  cfg.eta = 1e12;
  cfg.epsilon = 1e-12;
  try {
    run_dsvrg(ds, cps, cfg, 1);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.round >= 0);
    CHECK(e.partial.rounds == e.round + 1);
    CHECK(e.partial.messages > 0);
  }
}

TEST_CASE("run_dsvrg validates its inputs") {
  const LabeledDataset ds = noisy_linear(100, 4, 31);
  ShardSet cps = equal_shards(100, 2);
  LearnerConfig cfg = desk_cfg(4);

  SUBCASE("empty shard") {
    cps.shards[1].clear();
    CHECK_THROWS_AS(run_dsvrg(ds, cps, cfg, 1), Error);
  }
  SUBCASE("omega mismatch") {
    cfg.omega = 7;
    cfg.tau = 7;
    CHECK_THROWS_AS(run_dsvrg(ds, cps, cfg, 1), Error);
  }
  SUBCASE("bad learner parameters") {
    cfg.eta = 0.0;
    CHECK_THROWS_AS(run_dsvrg(ds, cps, cfg, 1), ConfigError);
  }
}
