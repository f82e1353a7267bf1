#include "fogplan/dsvrg.hpp"

#include <cmath>
#include <string>

#include "fogplan/rng.hpp"

namespace fogplan {

namespace {

inline double sigmoid_neg(double z) { return 1.0 / (1.0 + std::exp(z)); }

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

void LearnerConfig::validate() const {
  if (lambda < 0) throw ConfigError("lambda must be >= 0");
  if (!(eta > 0)) throw ConfigError("eta must be > 0");
  if (!(epsilon > 0)) throw ConfigError("epsilon must be > 0");
  if (max_rounds < 1) throw ConfigError("max_rounds must be >= 1");
  if (tau < 1) throw ConfigError("tau must be >= 1");
  if (omega < 1) throw ConfigError("omega must be >= 1");
}

DivergenceError::DivergenceError(int r, TrainingTrace trace)
    : Error("weights diverged at round " + std::to_string(r)),
      round(r),
      partial(std::move(trace)) {}

void local_update(std::span<double> w_k, std::span<const double> w_global,
                  std::span<const double> h_avg, std::span<const double> x, double y,
                  double eta, double reg_coeff) {
  const std::size_t d = x.size();
  const std::size_t wd = w_k.size();

  double z_k = wd > d ? w_k[d] : 0.0;
  double z_g = wd > d ? w_global[d] : 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    z_k += x[j] * w_k[j];
    z_g += x[j] * w_global[j];
  }
  // per-sample coefficients of g(w_k,s) and g(w_global,s)
  const double c_k = -y * sigmoid_neg(y * z_k);
  const double c_g = -y * sigmoid_neg(y * z_g);
  const double dc = c_k - c_g;

  for (std::size_t j = 0; j < d; ++j) {
    const double reg = reg_coeff * (w_k[j] - w_global[j]);
    w_k[j] -= eta * (dc * x[j] + reg + h_avg[j]);
  }
  if (wd > d) {
    const double reg = reg_coeff * (w_k[d] - w_global[d]);
    w_k[d] -= eta * (dc + reg + h_avg[d]);
  }
}

void global_update(std::span<const double> w_new, std::span<double> w_global, int t) {
  const double inv = 1.0 / (static_cast<double>(t) + 1.0);
  for (std::size_t j = 0; j < w_global.size(); ++j) {
    w_global[j] = (w_new[j] + static_cast<double>(t) * w_global[j]) * inv;
  }
}

TrainingTrace run_dsvrg(const LabeledDataset& data, const ShardSet& cp_shards,
                        const LearnerConfig& cfg, uint64_t seed) {
  ModelState state;
  return run_dsvrg(data, cp_shards, cfg, seed, state);
}

TrainingTrace run_dsvrg(const LabeledDataset& data, const ShardSet& cp_shards,
                        const LearnerConfig& cfg, uint64_t seed, ModelState& state) {
  cfg.validate();
  const int m1 = static_cast<int>(cp_shards.shards.size());
  if (m1 < 1) throw Error("run_dsvrg: need at least one collection point");
  for (int k = 0; k < m1; ++k) {
    if (cp_shards.shards[k].empty()) {
      throw Error("run_dsvrg: collection point " + std::to_string(k) + " has no data");
    }
  }
  const std::size_t wd = static_cast<std::size_t>(cfg.omega);
  if (wd != static_cast<std::size_t>(data.d) && wd != static_cast<std::size_t>(data.d) + 1) {
    throw Error("run_dsvrg: omega must be d or d+1");
  }

  state.w_global.assign(wd, 0.0);
  state.w_local.assign(m1, std::vector<double>(wd, 0.0));
  state.h_avg.assign(wd, 0.0);
  state.t = 0;

  TrainingTrace trace;
  trace.grad_norm_history.reserve(cfg.max_rounds);

  const int first_center = static_cast<int>(Rng(seed).below(static_cast<uint64_t>(m1)));
  std::vector<double> grad_k(wd);
  const uint64_t round_messages = 2ull * static_cast<uint64_t>(m1 - 1) * cfg.omega;

  for (int t = 0; t < cfg.max_rounds; ++t) {
    const int center = (first_center + t) % m1;

    // broadcast w_global, collect one full local gradient per CP, average in
    // fixed CP order
    trace.messages += round_messages;
    std::fill(state.h_avg.begin(), state.h_avg.end(), 0.0);
    for (int k = 0; k < m1; ++k) {
      ShardView shard{&data, cp_shards.shards[k]};
      logistic_gradient(shard, state.w_global, cfg.lambda, grad_k, trace.gradient_evals);
      for (std::size_t j = 0; j < wd; ++j) state.h_avg[j] += grad_k[j];
    }
    const double inv_m1 = 1.0 / static_cast<double>(m1);
    double grad_sq = 0.0;
    for (std::size_t j = 0; j < wd; ++j) {
      state.h_avg[j] *= inv_m1;
      grad_sq += state.h_avg[j] * state.h_avg[j];
    }
    trace.grad_norm_history.push_back(grad_sq);
    if (!std::isfinite(grad_sq)) {
      trace.rounds = t + 1;
      trace.flops = static_cast<double>(trace.gradient_evals) * cfg.tau;
      throw DivergenceError(t, trace);
    }

    // one variance-reduced pass over the centre's shard, starting from the
    // broadcast model, one step per local sample in shard order
    const auto& own = cp_shards.shards[center];
    std::vector<double>& w_k = state.w_local[center];
    w_k.assign(state.w_global.begin(), state.w_global.end());
    const double reg_coeff = 2.0 * cfg.lambda / static_cast<double>(own.size());
    for (uint32_t row : own) {
      const double* x = data.features.data() +
                        static_cast<std::size_t>(row) * static_cast<std::size_t>(data.d);
      local_update(w_k, state.w_global, state.h_avg,
                   std::span<const double>(x, static_cast<std::size_t>(data.d)),
                   static_cast<double>(data.labels[row]), cfg.eta, reg_coeff);
    }
    trace.gradient_evals += own.size();

    global_update(w_k, state.w_global, t);
    state.t = t + 1;
    trace.rounds = t + 1;
    if (!all_finite(state.w_global)) {
      trace.flops = static_cast<double>(trace.gradient_evals) * cfg.tau;
      throw DivergenceError(t, trace);
    }

    if (grad_sq <= cfg.epsilon) {
      trace.converged = true;
      break;
    }
  }

  trace.flops = static_cast<double>(trace.gradient_evals) * cfg.tau;
  return trace;
}

}  // namespace fogplan
