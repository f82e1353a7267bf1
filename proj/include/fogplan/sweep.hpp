#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fogplan/cost_model.hpp"
#include "fogplan/dataset.hpp"
#include "fogplan/dsvrg.hpp"

namespace fogplan {

// Aggregates of one grouping level over the surviving replications. CI fields
// are 95% half-widths (Student-t, n-1 dof), zero when fewer than two samples.
struct SweepRow {
  double gamma = 1;
  int m1 = 1;
  int replications = 0;  // successful
  int failures = 0;      // diverged or hit the round cap
  double rounds_mean = 0, rounds_ci = 0;
  double cost_network_mean = 0, cost_network_ci = 0;
  double cost_compute_mean = 0, cost_compute_ci = 0;
  double cost_total_mean = 0, cost_total_ci = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by gamma
  double gamma_star = 1;       // empirical argmin of cost_total_mean
  int m1_star = 1;
  double gamma_hat = 1;        // model optimum, snapped to a feasible level
  int m1_hat = 1;
  double gamma_hat_unclamped = 1;
  double overhead_pct = 0;     // extra cost of running at gamma_hat vs gamma_star
  double gain_vs_decentralised_pct = 0;
  double gain_vs_centralised_pct = 0;
  int total_failures = 0;
};

// Substitutes measured rounds/messages/FLOPS into the cost formulas:
//   cost_network = theta * (messages + C_D(gamma)),
//   cost_compute = beta * gamma^alpha * flops.
// Rejects non-converged traces unless allow_capped is set.
CostBreakdown empirical_cost(const TrainingTrace& trace, double gamma,
                             const SystemConfig& cfg, bool allow_capped = false);

// stream tag of the per-replication partition seeds: mix_seed(master, tag, rep)
inline constexpr uint64_t kPartitionStreamTag = 0x7061727469ULL;

struct CellTrace {
  int m1 = 1;
  int rep = 0;
  bool ok = false;  // converged and priced
  TrainingTrace trace;
};

// The validation protocol: for every level in m1_grid (all integer m1 when
// empty; the model's snapped optimum is always included) and every
// replication, draw a fresh Poisson partition, regroup, run DSVRG and price
// the trace. Cells run concurrently; each derives its seed from
// (master_seed, m1, replication) so scheduling never changes results.
// trace_sink, when given, receives every cell's trace (including failed ones).
SweepResult sweep_gamma(const LabeledDataset& train, const SystemConfig& sys,
                        const LearnerConfig& learner, std::span<const int> m1_grid,
                        int replications, uint64_t master_seed,
                        std::vector<CellTrace>* trace_sink = nullptr);

// (gain vs gamma=1, gain vs gamma=m0) of operating at the model's level:
//   100 (C(1) - C(gh)) / C(1) and 100 (C(m0) - C(gh)) / C(m0).
// Requires rows at both extremes.
std::pair<double, double> gain_vs_extremes(const SweepResult& result);

struct SensitivityRow {
  double value = 0;
  std::vector<double> gamma_hat = {};  // snapped, one per alpha
  std::vector<double> gamma_unclamped = {};
};

// Re-solves the model along one parameter axis ("n0", "m0", "mu" or "alpha")
// for each alpha regime. For axis "alpha" the alphas list is ignored and the
// values themselves are the regimes.
std::vector<SensitivityRow> sensitivity_sweep(const SystemConfig& base,
                                              const std::string& axis,
                                              std::span<const double> values,
                                              std::span<const double> alphas);

}  // namespace fogplan
