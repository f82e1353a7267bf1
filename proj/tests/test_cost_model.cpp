#include <doctest.h>

#include <cmath>
#include <vector>

#include "fogplan/cost_model.hpp"
#include "fogplan/rng.hpp"

using namespace fogplan;

namespace {

SystemConfig table_iii(double epsilon = 1e-5) {
  SystemConfig cfg;  // defaults are the paper-profile values
  cfg.epsilon = epsilon;
  return cfg;
}

// valid random config; mu and alpha as requested
SystemConfig random_config(Rng& rng, double mu, double alpha) {
  SystemConfig cfg;
  cfg.m0 = 20 + static_cast<int>(rng.below(1980));
  cfg.n0 = 10 + rng.uniform01() * 490;
  cfg.d = 2 + static_cast<int>(rng.below(199));
  cfg.omega = 2 + static_cast<int>(rng.below(199));
  cfg.kappa = 1 + rng.uniform01() * 4999;
  cfg.epsilon = std::pow(10.0, -1.0 - rng.uniform01() * 6.0);
  cfg.theta = 0.1 + rng.uniform01() * 9.9;
  cfg.mu = mu;
  cfg.alpha = alpha;
  cfg.tau = 1 + rng.uniform01() * 199;
  return cfg;
}

}  // namespace

TEST_CASE("rounds_model on Table III inputs") {
  const SystemConfig cfg = table_iii();
  CHECK(rounds_model(2.0, cfg) == doctest::Approx(55.01943407157194).epsilon(1e-12));

  SUBCASE("kappa -> 0 leaves only the accuracy factor") {
    SystemConfig c = cfg;
    c.kappa = 1e-30;
    CHECK(rounds_model(1.0, c) == doctest::Approx(std::log2(1e5)).epsilon(1e-12));
    CHECK(rounds_model(37.0, c) == doctest::Approx(std::log2(1e5)).epsilon(1e-12));
  }
  SUBCASE("epsilon = 0.5 gives one accuracy bit") {
    SystemConfig c = cfg;
    c.epsilon = 0.5;
    CHECK(rounds_model(2.0, c) == doctest::Approx(1.0 + 518.0 / 224.0).epsilon(1e-12));
  }
  SUBCASE("gamma outside [1, m0] is rejected") {
    CHECK_THROWS_AS(rounds_model(0.5, cfg), ConfigError);
    CHECK_THROWS_AS(rounds_model(401.0, cfg), ConfigError);
  }
}

TEST_CASE("traffic_per_round") {
  CHECK(traffic_per_round(1, 54) == 0.0);
  CHECK(traffic_per_round(400, 54) == 43092.0);
  CHECK(traffic_per_round(2, 1) == 2.0);
  CHECK_THROWS_AS(traffic_per_round(0.5, 1), ConfigError);
}

TEST_CASE("algorithm_traffic vanishes at full centralisation") {
  const SystemConfig cfg = table_iii();
  CHECK(algorithm_traffic(400.0, cfg) == 0.0);
}

TEST_CASE("data_traffic") {
  const SystemConfig cfg = table_iii();
  CHECK(data_traffic(1.0, cfg) == 0.0);
  CHECK(data_traffic(400.0, cfg) == doctest::Approx(399.0 * 6048.0).epsilon(1e-12));
  CHECK(data_traffic(2.0, cfg) == doctest::Approx(1209600.0).epsilon(1e-12));
}

TEST_CASE("compute_ops") {
  SUBCASE("Table III at gamma 2") {
    const SystemConfig cfg = table_iii();
    CHECK(compute_ops(2.0, cfg) == doctest::Approx(133768529.98047657).epsilon(1e-12));
  }
  SUBCASE("single device runs one extra pass") {
    SystemConfig cfg = table_iii();
    cfg.m0 = 1;
    const double r = rounds_model(1.0, cfg);
    CHECK(compute_ops(1.0, cfg) == doctest::Approx(cfg.tau * cfg.n0 * 2.0 * r).epsilon(1e-12));
  }
  SUBCASE("linear in tau") {
    SystemConfig cfg = table_iii();
    const double base = compute_ops(3.0, cfg);
    cfg.tau *= 2;
    CHECK(compute_ops(3.0, cfg) == doctest::Approx(2.0 * base).epsilon(1e-12));
  }
}

TEST_CASE("compute_cost") {
  SUBCASE("free computation") {
    SystemConfig cfg = table_iii();
    cfg.mu = 0.0;
    for (double g : {1.0, 7.0, 400.0}) CHECK(compute_cost(g, cfg) == 0.0);
  }
  SUBCASE("Table III at gamma 1, alpha 1") {
    const SystemConfig cfg = table_iii();
    CHECK(compute_cost(1.0, cfg) == doctest::Approx(22658.90475450765).epsilon(1e-12));
  }
  SUBCASE("alpha 2 vs alpha 0.5 at gamma 4") {
    SystemConfig a = table_iii(), b = table_iii();
    a.alpha = 2.0;
    b.alpha = 0.5;
    CHECK(compute_cost(4.0, a) / compute_cost(4.0, b) == doctest::Approx(8.0).epsilon(1e-12));
  }
}

TEST_CASE("total_cost assembles the components additively") {
  const SystemConfig cfg = table_iii();
  const CostBreakdown b = total_cost(2.0, cfg);
  CHECK(b.cost_network == cfg.theta * (b.traffic_algorithm + b.traffic_data));
  CHECK(b.cost_total == b.cost_network + b.cost_compute);
  CHECK(b.cost_total == doctest::Approx(2418831.3830623194).epsilon(1e-12));

  SUBCASE("gamma 1 with mu 0 is algorithm traffic only") {
    SystemConfig c = cfg;
    c.mu = 0.0;
    const CostBreakdown x = total_cost(1.0, c);
    CHECK(x.traffic_data == 0.0);
    CHECK(x.cost_compute == 0.0);
    CHECK(x.cost_total == c.theta * x.traffic_algorithm);
  }
  SUBCASE("boundary identities hold at machine precision") {
    CHECK(total_cost(1.0, cfg).traffic_data == 0.0);
    CHECK(total_cost(400.0, cfg).traffic_algorithm == 0.0);
  }
  SUBCASE("C_D never decreases with gamma") {
    double prev = -1;
    for (double g = 1.0; g <= 400.0; g += 7.3) {
      const double cd = data_traffic(g, cfg);
      CHECK(cd >= prev);
      prev = cd;
    }
  }
  SUBCASE("components stay non-negative across the domain") {
    for (double g : log_spaced_grid(1.0, 400.0, 100)) {
      const CostBreakdown x = total_cost(g, cfg);
      CHECK(x.rounds >= 0);
      CHECK(x.traffic_algorithm >= 0);
      CHECK(x.traffic_data >= 0);
      CHECK(x.cost_compute >= 0);
    }
  }
}

TEST_CASE("kappa_convention") {
  CHECK(kappa_convention(44800, 54) == doctest::Approx(1555.3777676178865).epsilon(1e-12));
  CHECK(kappa_convention(1, 1) == 1.0);
  CHECK_THROWS_AS(kappa_convention(0, 5), ConfigError);
}

TEST_CASE("closed-form network optimum on Table III") {
  SystemConfig cfg = table_iii();
  cfg.mu = 0.0;
  const ClosedFormOptimum cf = closed_form_network_optimum(cfg);
  REQUIRE_FALSE(cf.boundary);
  CHECK(cf.gamma_tilde == doctest::Approx(3.8815014102434056).epsilon(1e-12));
}

TEST_CASE("closed form reports the boundary sentinel on a non-positive denominator") {
  SystemConfig cfg = table_iii(1e-7);
  cfg.mu = 0.0;
  cfg.d = 1;       // shrink the data term until the denominator flips
  cfg.omega = 200;
  cfg.kappa = 10;
  const double L = std::log2(1.0 / cfg.epsilon);
  const double denom = cfg.d * 400.0 * 112.0 * 112.0 + 2 * cfg.kappa * L * cfg.omega -
                       2 * L * 400.0 * 112.0 * cfg.omega;
  REQUIRE(denom < 0);
  CHECK(closed_form_network_optimum(cfg).boundary);
}

TEST_CASE("numeric optimum agrees with the closed form when mu = 0") {
  Rng rng(20240118);
  int accepted = 0;
  while (accepted < 50) {
    SystemConfig cfg = random_config(rng, 0.0, 1.0);
    const ClosedFormOptimum cf = closed_form_network_optimum(cfg);
    if (cf.boundary || cf.gamma_tilde <= 0) continue;
    ++accepted;
    const OptimumReport rep = numeric_optimum(cfg);
    CHECK(std::abs(rep.gamma_unclamped - cf.gamma_tilde) / cf.gamma_tilde < 1e-6);
  }
}

TEST_CASE("numeric optimum on Table III with mu = 0") {
  SystemConfig cfg = table_iii();
  cfg.mu = 0.0;
  const OptimumReport rep = numeric_optimum(cfg);
  CHECK(rep.gamma_unclamped == doctest::Approx(3.8815014102434056).epsilon(1e-7));
  CHECK(rep.gamma_hat == doctest::Approx(rep.gamma_unclamped).epsilon(1e-9));
  // snapped neighbour: m1 in {floor(400/3.88), ceil(400/3.88)} = {103, 104}
  CHECK((rep.m1_hat == 103 || rep.m1_hat == 104));
  CHECK(rep.cost_at_hat ==
        doctest::Approx(total_cost(rep.gamma_hat, cfg).cost_total).epsilon(1e-12));

  SUBCASE("solve_optimum reports the closed-form method") {
    const OptimumReport s = solve_optimum(cfg);
    CHECK(s.method == "closed_form_network");
    CHECK(s.gamma_unclamped == doctest::Approx(3.8815014102434056).epsilon(1e-12));
  }
}

TEST_CASE("clamping") {
  SUBCASE("tiny epsilon and huge omega pull the optimum above m0") {
    SystemConfig cfg;
    cfg.m0 = 20;
    cfg.n0 = 10;
    cfg.d = 1;
    cfg.omega = 5000;
    cfg.kappa = 4000;
    cfg.epsilon = 1e-7;
    cfg.theta = 1;
    cfg.mu = 0;
    cfg.tau = 1;
    const OptimumReport rep = numeric_optimum(cfg);
    CHECK(rep.gamma_unclamped > 20.0);
    CHECK(rep.clamped_high);
    CHECK(rep.gamma_hat == 20.0);
    CHECK(rep.m1_hat == 1);
  }
  SUBCASE("large d and small omega pin the optimum at 1") {
    SystemConfig cfg;
    cfg.m0 = 400;
    cfg.n0 = 112;
    cfg.d = 5000;
    cfg.omega = 1;
    cfg.kappa = 518;
    cfg.epsilon = 1e-5;
    cfg.mu = 0;
    cfg.tau = 1;
    const OptimumReport rep = numeric_optimum(cfg);
    CHECK(rep.gamma_unclamped < 1.0);
    CHECK(rep.clamped_low);
    CHECK(rep.gamma_hat == 1.0);
    CHECK(rep.m1_hat == 400);
  }
  SUBCASE("flat cost falls back to gamma 1") {
    SystemConfig cfg = table_iii();
    cfg.theta = 0.0;
    cfg.mu = 0.0;
    const OptimumReport rep = numeric_optimum(cfg);
    CHECK(rep.gamma_hat == 1.0);
    CHECK(rep.m1_hat == 400);
  }
  SUBCASE("fuzzed configs always land inside [1, m0]") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
      const double mu = rng.uniform01() < 0.3 ? 0.0 : std::pow(10.0, -6.0 + 7.0 * rng.uniform01());
      const double alpha = 0.25 + rng.uniform01() * 2.75;
      const SystemConfig cfg = random_config(rng, mu, alpha);
      const OptimumReport rep = numeric_optimum(cfg);
      CHECK(rep.gamma_hat >= 1.0);
      CHECK(rep.gamma_hat <= static_cast<double>(cfg.m0));
      CHECK(rep.m1_hat >= 1);
      CHECK(rep.m1_hat <= cfg.m0);
    }
  }
}

TEST_CASE("derivative sign profile") {
  SUBCASE("alpha = 1 has a single negative-to-positive crossing at the optimum") {
    const SystemConfig cfg = table_iii();
    const auto grid = log_spaced_grid(1.0, 400.0, 1000);
    const auto signs = derivative_sign_profile(cfg, grid);
    int transitions = 0;
    std::size_t where = 0;
    int last = 0;
    for (std::size_t i = 0; i < signs.size(); ++i) {
      if (signs[i] == 0) continue;
      if (last < 0 && signs[i] > 0) {
        ++transitions;
        where = i;
      }
      CHECK_FALSE((last > 0 && signs[i] < 0));  // never turns back down
      last = signs[i];
    }
    CHECK(transitions == 1);
    const OptimumReport rep = numeric_optimum(cfg);
    CHECK(grid[where - 1] <= rep.gamma_unclamped);
    CHECK(grid[where] >= rep.gamma_unclamped * (1.0 - 1e-9));
  }
  SUBCASE("constant cost has all-zero signs") {
    SystemConfig cfg = table_iii();
    cfg.theta = 0.0;
    cfg.mu = 0.0;
    const auto grid = log_spaced_grid(1.0, 400.0, 50);
    for (int s : derivative_sign_profile(cfg, grid)) CHECK(s == 0);
  }
}

TEST_CASE("scaling theta and beta together rescales cost and keeps the argmin") {
  SystemConfig cfg = table_iii();
  const OptimumReport base = numeric_optimum(cfg);
  SystemConfig scaled = cfg;
  scaled.theta *= 37.0;  // beta = theta * mu scales along
  const OptimumReport rep = numeric_optimum(scaled);
  for (double g : log_spaced_grid(1.0, 400.0, 30)) {
    CHECK(total_cost(g, scaled).cost_total ==
          doctest::Approx(37.0 * total_cost(g, cfg).cost_total).epsilon(1e-12));
  }
  CHECK(rep.gamma_hat == doctest::Approx(base.gamma_hat).epsilon(1e-9));
  CHECK(rep.m1_hat == base.m1_hat);
}

TEST_CASE("SystemConfig validation names the field") {
  SystemConfig cfg;
  cfg.epsilon = 2.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("epsilon"), ConfigError);
  cfg = SystemConfig{};
  cfg.kappa = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("kappa"), ConfigError);
  cfg = SystemConfig{};
  cfg.alpha = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("alpha"), ConfigError);
}
