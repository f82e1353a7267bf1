#include "fogplan/sweep.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <set>

#include "fogplan/rng.hpp"
#include "fogplan/shards.hpp"

namespace fogplan {

namespace {

struct Stats {
  double mean = 0;
  double ci = 0;  // 95% half-width, Student-t with n-1 dof
};

Stats aggregate(const std::vector<double>& xs) {
  Stats s;
  const std::size_t n = xs.size();
  if (n == 0) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(n);
  if (n < 2) return s;
  double ssq = 0;
  for (double x : xs) ssq += (x - s.mean) * (x - s.mean);
  const double sd = std::sqrt(ssq / static_cast<double>(n - 1));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  s.ci = boost::math::quantile(dist, 0.975) * sd / std::sqrt(static_cast<double>(n));
  return s;
}

struct Cell {
  bool ok = false;
  double rounds = 0;
  CostBreakdown cost;
  TrainingTrace trace;  // filled only when a sink was requested
};

}  // namespace

CostBreakdown empirical_cost(const TrainingTrace& trace, double gamma,
                             const SystemConfig& cfg, bool allow_capped) {
  cfg.validate();
  if (!trace.converged && !allow_capped) {
    throw Error("empirical_cost: trace did not converge (pass allow_capped to price it anyway)");
  }
  CostBreakdown b;
  b.rounds = static_cast<double>(trace.rounds);
  b.traffic_algorithm = static_cast<double>(trace.messages);
  b.traffic_data = data_traffic(gamma, cfg);
  b.cost_network = cfg.theta * (b.traffic_algorithm + b.traffic_data);
  b.cost_compute = cfg.beta() * std::pow(gamma, cfg.alpha) * trace.flops;
  b.cost_total = b.cost_network + b.cost_compute;
  return b;
}

SweepResult sweep_gamma(const LabeledDataset& train, const SystemConfig& sys,
                        const LearnerConfig& learner, std::span<const int> m1_grid,
                        int replications, uint64_t master_seed,
                        std::vector<CellTrace>* trace_sink) {
  sys.validate();
  learner.validate();
  if (replications < 1) throw Error("sweep_gamma: replications must be >= 1");

  const OptimumReport model = solve_optimum(sys);

  // grid of CP counts, descending so rows come out ordered by gamma; the
  // model's snapped optimum always gets a row
  std::set<int, std::greater<int>> levels;
  if (m1_grid.empty()) {
    for (int m1 = 1; m1 <= sys.m0; ++m1) levels.insert(m1);
  } else {
    for (int m1 : m1_grid) {
      if (m1 < 1 || m1 > sys.m0) throw Error("sweep_gamma: m1 grid value outside [1, m0]");
      levels.insert(m1);
    }
  }
  levels.insert(model.m1_hat);
  const std::vector<int> m1s(levels.begin(), levels.end());

  // one Poisson partition per replication, shared by every level
  std::vector<ShardSet> partitions;
  partitions.reserve(replications);
  for (int r = 0; r < replications; ++r) {
    partitions.push_back(
        partition_poisson(train, sys.m0, sys.n0, mix_seed(master_seed, kPartitionStreamTag, r)));
  }

  const std::size_t n_levels = m1s.size();
  std::vector<Cell> cells(n_levels * static_cast<std::size_t>(replications));

#pragma omp parallel for schedule(dynamic)
  for (long idx = 0; idx < static_cast<long>(cells.size()); ++idx) {
    const std::size_t li = static_cast<std::size_t>(idx) / replications;
    const int rep = static_cast<int>(static_cast<std::size_t>(idx) % replications);
    const int m1 = m1s[li];
    const double gamma = static_cast<double>(sys.m0) / m1;
    Cell& cell = cells[idx];
    try {
      const ShardSet cps = regroup(partitions[rep], gamma);
      const TrainingTrace trace =
          run_dsvrg(train, cps, learner, mix_seed(master_seed, m1, rep));
      if (trace_sink) cell.trace = trace;
      if (!trace.converged) continue;  // round cap: excluded like a divergence
      cell.cost = empirical_cost(trace, gamma, sys);
      cell.rounds = trace.rounds;
      cell.ok = true;
    } catch (const DivergenceError& e) {
      if (trace_sink) cell.trace = e.partial;
      // failed replication, recorded below
    }
  }

  if (trace_sink) {
    trace_sink->clear();
    trace_sink->reserve(cells.size());
    for (std::size_t li = 0; li < n_levels; ++li) {
      for (int r = 0; r < replications; ++r) {
        const Cell& cell = cells[li * replications + r];
        trace_sink->push_back({m1s[li], r, cell.ok, cell.trace});
      }
    }
  }

  SweepResult result;
  result.gamma_hat = model.gamma_snapped;
  result.m1_hat = model.m1_hat;
  result.gamma_hat_unclamped = model.gamma_unclamped;
  result.rows.reserve(n_levels);

  for (std::size_t li = 0; li < n_levels; ++li) {
    SweepRow row;
    row.m1 = m1s[li];
    row.gamma = static_cast<double>(sys.m0) / row.m1;
    std::vector<double> rounds, net, comp, total;
    for (int r = 0; r < replications; ++r) {
      const Cell& cell = cells[li * replications + r];
      if (!cell.ok) {
        ++row.failures;
        continue;
      }
      rounds.push_back(cell.rounds);
      net.push_back(cell.cost.cost_network);
      comp.push_back(cell.cost.cost_compute);
      total.push_back(cell.cost.cost_total);
    }
    row.replications = static_cast<int>(rounds.size());
    const Stats sr = aggregate(rounds), sn = aggregate(net), sc = aggregate(comp),
                st = aggregate(total);
    row.rounds_mean = sr.mean;
    row.rounds_ci = sr.ci;
    row.cost_network_mean = sn.mean;
    row.cost_network_ci = sn.ci;
    row.cost_compute_mean = sc.mean;
    row.cost_compute_ci = sc.ci;
    row.cost_total_mean = st.mean;
    row.cost_total_ci = st.ci;
    result.total_failures += row.failures;
    result.rows.push_back(row);
  }

  // empirical optimum over rows that have data
  const SweepRow* best = nullptr;
  for (const auto& row : result.rows) {
    if (row.replications == 0) continue;
    if (!best || row.cost_total_mean < best->cost_total_mean) best = &row;
  }
  if (!best) throw Error("sweep_gamma: every replication failed; lower eta or loosen epsilon");
  result.gamma_star = best->gamma;
  result.m1_star = best->m1;

  const SweepRow* hat = nullptr;
  for (const auto& row : result.rows) {
    if (row.m1 == result.m1_hat) hat = &row;
  }
  if (hat && hat->replications > 0) {
    result.overhead_pct =
        100.0 * (hat->cost_total_mean - best->cost_total_mean) / best->cost_total_mean;
  } else {
    result.overhead_pct = std::numeric_limits<double>::quiet_NaN();
  }

  const bool has_extremes =
      std::any_of(result.rows.begin(), result.rows.end(),
                  [&](const SweepRow& r) { return r.m1 == sys.m0 && r.replications > 0; }) &&
      std::any_of(result.rows.begin(), result.rows.end(),
                  [&](const SweepRow& r) { return r.m1 == 1 && r.replications > 0; });
  if (has_extremes && hat && hat->replications > 0) {
    const auto gains = gain_vs_extremes(result);
    result.gain_vs_decentralised_pct = gains.first;
    result.gain_vs_centralised_pct = gains.second;
  } else {
    result.gain_vs_decentralised_pct = std::numeric_limits<double>::quiet_NaN();
    result.gain_vs_centralised_pct = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

std::pair<double, double> gain_vs_extremes(const SweepResult& result) {
  const SweepRow* at_one = nullptr;    // gamma = 1 (m1 = m0)
  const SweepRow* at_full = nullptr;   // gamma = m0 (m1 = 1)
  const SweepRow* at_hat = nullptr;
  for (const auto& row : result.rows) {
    if (row.gamma == 1.0) at_one = &row;
    if (row.m1 == 1) at_full = &row;
    if (row.m1 == result.m1_hat) at_hat = &row;
  }
  if (!at_one || !at_full) {
    throw Error("gain_vs_extremes: sweep rows must include gamma = 1 and gamma = m0");
  }
  if (!at_hat) throw Error("gain_vs_extremes: no row at the model optimum");
  const double c1 = at_one->cost_total_mean;
  const double cm = at_full->cost_total_mean;
  const double ch = at_hat->cost_total_mean;
  return {100.0 * (c1 - ch) / c1, 100.0 * (cm - ch) / cm};
}

std::vector<SensitivityRow> sensitivity_sweep(const SystemConfig& base,
                                              const std::string& axis,
                                              std::span<const double> values,
                                              std::span<const double> alphas) {
  if (values.empty()) throw ConfigError("sensitivity axis_values must be non-empty");
  std::vector<SensitivityRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    SensitivityRow row;
    row.value = v;
    auto solve_at = [&](SystemConfig cfg, double value, double alpha) {
      if (axis == "n0") {
        cfg.n0 = value;
      } else if (axis == "m0") {
        if (value < 1 || value != std::floor(value)) {
          throw ConfigError("axis_values for m0 must be positive integers");
        }
        cfg.m0 = static_cast<int>(value);
      } else if (axis == "mu") {
        cfg.mu = value;
      } else if (axis == "alpha") {
        cfg.alpha = value;
      } else {
        throw ConfigError("axis must be one of n0, m0, mu, alpha");
      }
      if (axis != "alpha") cfg.alpha = alpha;
      const OptimumReport rep = solve_optimum(cfg);
      row.gamma_hat.push_back(rep.gamma_snapped);
      row.gamma_unclamped.push_back(rep.gamma_unclamped);
    };
    if (axis == "alpha") {
      solve_at(base, v, base.alpha);
    } else {
      for (double a : alphas) solve_at(base, v, a);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fogplan
