#pragma once

#include <span>
#include <string>
#include <vector>

#include "fogplan/errors.hpp"

namespace fogplan {

// All analytic model parameters. The model treats m1 = m0/gamma and the round
// count as real-valued; nothing here is rounded.
struct SystemConfig {
  int m0 = 400;          // devices generating data
  double n0 = 112;       // mean points per device
  int d = 54;            // features per point
  int omega = 54;        // transmitted model size
  double kappa = 518;    // condition number
  double epsilon = 1e-5; // target accuracy
  double theta = 1.0;    // Eu per transmitted feature/parameter
  double mu = 1e-4;      // compute/communication cost ratio (beta = theta*mu)
  double alpha = 1.0;    // compute-cost exponent, f(gamma) = gamma^alpha
  double tau = 54;       // FLOPS per gradient evaluation

  double beta() const { return theta * mu; }
  double total_features() const { return static_cast<double>(m0) * n0 * d; }

  void validate() const;  // ConfigError naming the field
};

// The four cost components plus the round count at one grouping level, in the
// same units whether filled from the model or from a measured trace.
struct CostBreakdown {
  double rounds = 0;
  double traffic_algorithm = 0;  // C_A, feature units
  double traffic_data = 0;       // C_D, feature units
  double cost_network = 0;       // theta * (C_A + C_D)
  double cost_compute = 0;       // C_P
  double cost_total = 0;
};

struct OptimumReport {
  double gamma_unclamped = 1;  // stationary point of C over gamma > 0
  double gamma_hat = 1;        // clamped to [1, m0]
  int m1_hat = 1;              // integer CP count after the feasibility snap
  double gamma_snapped = 1;    // m0 / m1_hat
  double cost_at_hat = 0;      // total cost at gamma_hat
  double cost_at_snapped = 0;
  bool clamped_low = false;
  bool clamped_high = false;
  std::string method = "numeric";  // or "closed_form_network"
};

// R(gamma) = (1 + kappa/(gamma n0)) log2(1/epsilon)
double rounds_model(double gamma, const SystemConfig& cfg);

// traffic of one round: 2 (m1 - 1) omega
double traffic_per_round(double m1, double omega);

// C_A = traffic_per_round(m0/gamma) * R(gamma)
double algorithm_traffic(double gamma, const SystemConfig& cfg);

// C_D = (m0 - m0/gamma) n0 d
double data_traffic(double gamma, const SystemConfig& cfg);

// P = tau * n1 * (m1 + 1) * R(gamma), n1 = gamma n0
double compute_ops(double gamma, const SystemConfig& cfg);

// C_P = beta * gamma^alpha * P
double compute_cost(double gamma, const SystemConfig& cfg);

// Assembles every component; cost_total = theta*(C_A + C_D) + C_P.
CostBreakdown total_cost(double gamma, const SystemConfig& cfg);

// Condition-number convention kappa = sqrt(N d). Only a helper: configs always
// carry kappa explicitly.
double kappa_convention(double n_points, double d);

struct ClosedFormOptimum {
  bool boundary = false;  // non-positive denominator: no interior stationary point
  double gamma_tilde = 0;
};

// Network-only (beta = 0) stationary point:
//   4 k L m w / (d m n^2 + 2 k L w - 2 L m n w),  L = log2(1/epsilon)
ClosedFormOptimum closed_form_network_optimum(const SystemConfig& cfg);

// Minimises the total cost over continuous gamma. A coarse log-spaced scan
// brackets the minimum before golden-section refinement, and the scan range
// expands geometrically so the stationary point is located even when it falls
// outside [1, m0]; the report then clamps and snaps to the nearest feasible
// integer-m1 levels, keeping the cheaper neighbour.
OptimumReport numeric_optimum(const SystemConfig& cfg);

// numeric_optimum, but when mu = 0 and the closed form has an interior
// solution the closed form provides gamma and the method tag.
OptimumReport solve_optimum(const SystemConfig& cfg);

// Sign of dC/dgamma by central differences (relative step 1e-6) at each grid
// point: -1, 0 or +1.
std::vector<int> derivative_sign_profile(const SystemConfig& cfg,
                                         std::span<const double> gamma_grid);

std::vector<double> log_spaced_grid(double lo, double hi, int points);

}  // namespace fogplan
