#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fogplan/errors.hpp"
#include "fogplan/kernels.hpp"
#include "fogplan/shards.hpp"

namespace fogplan {

struct LearnerConfig {
  double lambda = 1e-4;   // regularisation weight
  double eta = 0.5;       // step size
  double epsilon = 1e-2;  // stop when |grad|^2 <= epsilon
  int max_rounds = 500;
  double tau = 54;        // FLOPS per gradient evaluation
  int omega = 54;         // model dimension (d, or d+1 with intercept)

  void validate() const;
};

struct ModelState {
  std::vector<double> w_global;               // the rotating centre's model
  std::vector<std::vector<double>> w_local;   // last pass result per CP
  std::vector<double> h_avg;                  // average of the CP gradients
  int t = 0;
};

struct TrainingTrace {
  int rounds = 0;
  uint64_t gradient_evals = 0;
  double flops = 0.0;      // gradient_evals * tau
  uint64_t messages = 0;   // transmitted parameter units
  std::vector<double> grad_norm_history;  // squared norm per round
  bool converged = false;
};

// Weights went non-finite; carries what was measured up to that round.
struct DivergenceError : Error {
  DivergenceError(int round, TrainingTrace trace);
  int round;
  TrainingTrace partial;
};

// One variance-reduced step on a single sample:
//   w_k <- w_k - eta * (g(w_k,s) - g(w_global,s) + h_avg)
// where g(w,s) is the per-sample gradient including the 2*lambda/n * w term
// (reg_coeff). x is the raw feature row; an intercept is implied when the
// weight vectors are one longer than x.
void local_update(std::span<double> w_k, std::span<const double> w_global,
                  std::span<const double> h_avg, std::span<const double> x, double y,
                  double eta, double reg_coeff);

// w_global <- (w_new + t * w_global) / (t + 1)
void global_update(std::span<const double> w_new, std::span<double> w_global, int t);

// Runs DSVRG over the collection-point shards until |grad|^2 <= epsilon or
// max_rounds. Every round: the centre broadcasts the global model, all CPs
// return their full local gradients, the centre averages them, runs one pass
// of local_update over its own shard in shard order, folds the result into the
// global model, and the centre role advances round-robin. The seed picks the
// starting centre. Per round this counts 2*(m1-1)*omega message units and
// (sum of shard sizes) + (centre shard size) gradient evaluations.
TrainingTrace run_dsvrg(const LabeledDataset& data, const ShardSet& cp_shards,
                        const LearnerConfig& cfg, uint64_t seed);

// As above but also exposes the final model state (used by tests and the
// trace dump).
TrainingTrace run_dsvrg(const LabeledDataset& data, const ShardSet& cp_shards,
                        const LearnerConfig& cfg, uint64_t seed, ModelState& state);

}  // namespace fogplan
