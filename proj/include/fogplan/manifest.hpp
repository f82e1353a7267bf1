#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fogplan/cost_model.hpp"
#include "fogplan/dsvrg.hpp"

namespace fogplan {

// A flat key = value experiment description. Unknown keys and out-of-range
// values raise ConfigError naming the key; the raw file text is kept so runs
// can copy it verbatim into their output directory.
struct ExperimentManifest {
  std::string profile = "custom";

  // model parameters
  int m0 = 400;
  double n0 = 112;
  int d = 54;
  int omega = 0;  // 0 = follow the learner: d, or d+1 with an intercept
  double kappa = 518;
  bool kappa_auto = false;  // kappa = sqrt(m0 n0 d) resolved at use
  std::vector<double> epsilons{1e-5};
  double theta = 1.0;
  double mu = 1e-4;
  double alpha = 1.0;
  double tau = 0;
  bool tau_auto = true;  // tau = omega

  // learner
  double lambda = 1e-4;
  double eta = 0.5;
  int max_rounds = 500;
  bool standardize = true;
  bool intercept = false;

  // sweep
  std::vector<int> m1_grid;  // empty = all integer m1 in [1, m0]
  int replications = 10;
  uint64_t seed = 1;

  // dataset
  std::string dataset;
  int class_pos = 3;
  int class_neg = 7;
  double train_fraction = 0.8;

  // sensitivity
  std::string axis;
  std::vector<double> axis_values;
  std::vector<double> alphas{0.5, 1.0, 2.0};

  bool long_run = false;  // requires --long on sweep commands
  bool dump_traces = false;
  bool dump_shards = false;

  std::string source_path;
  std::string source_text;

  static ExperimentManifest load(const std::string& path);
  static ExperimentManifest parse(const std::string& text, const std::string& origin);

  void validate() const;

  double resolved_kappa() const;
  double resolved_tau() const;
  int model_dim() const { return intercept ? d + 1 : d; }
  int resolved_omega() const { return omega > 0 ? omega : model_dim(); }

  SystemConfig system_config(double epsilon) const;
  LearnerConfig learner_config(double epsilon) const;
};

}  // namespace fogplan
