#include "fogplan/cost_model.hpp"

#include <algorithm>
#include <cmath>

namespace fogplan {

namespace {

double log2_inv(double epsilon) { return std::log2(1.0 / epsilon); }

// cost formulas evaluated without the [1, m0] domain check; the optimiser
// needs them on either side of the boundaries
double raw_total(double gamma, const SystemConfig& c) {
  const double m1 = static_cast<double>(c.m0) / gamma;
  const double rounds = (1.0 + c.kappa / (gamma * c.n0)) * log2_inv(c.epsilon);
  const double traffic_alg = 2.0 * (m1 - 1.0) * c.omega * rounds;
  const double traffic_dat = (static_cast<double>(c.m0) - m1) * c.n0 * c.d;
  const double ops = c.tau * (gamma * c.n0) * (m1 + 1.0) * rounds;
  return c.theta * (traffic_alg + traffic_dat) + c.beta() * std::pow(gamma, c.alpha) * ops;
}

// golden-section in log(gamma); assumes a minimum inside [a, b]
double golden_min_log(const SystemConfig& c, double a, double b) {
  constexpr double invphi = 0.6180339887498949;
  double ua = std::log(a), ub = std::log(b);
  double uc = ub - invphi * (ub - ua);
  double ud = ua + invphi * (ub - ua);
  double fc = raw_total(std::exp(uc), c);
  double fd = raw_total(std::exp(ud), c);
  while (ub - ua > 1e-12) {
    if (fc < fd) {
      ub = ud;
      ud = uc;
      fd = fc;
      uc = ub - invphi * (ub - ua);
      fc = raw_total(std::exp(uc), c);
    } else {
      ua = uc;
      uc = ud;
      fc = fd;
      ud = ua + invphi * (ub - ua);
      fd = raw_total(std::exp(ud), c);
    }
  }
  return std::exp(0.5 * (ua + ub));
}

void check_gamma(double gamma, const SystemConfig& cfg) {
  if (!(gamma >= 1.0 && gamma <= static_cast<double>(cfg.m0))) {
    throw ConfigError("gamma must be in [1, m0]");
  }
}

// cheaper of the two integer-m1 neighbours of gamma_hat; ties favour more CPs
void apply_snap(OptimumReport& rep, const SystemConfig& cfg) {
  const double m0 = static_cast<double>(cfg.m0);
  const double m1_real = m0 / rep.gamma_hat;
  const int m1_lo = std::clamp(static_cast<int>(std::floor(m1_real)), 1, cfg.m0);
  const int m1_hi = std::clamp(static_cast<int>(std::ceil(m1_real)), 1, cfg.m0);
  const double cost_lo = raw_total(m0 / m1_lo, cfg);
  const double cost_hi = raw_total(m0 / m1_hi, cfg);
  rep.m1_hat = cost_hi <= cost_lo ? m1_hi : m1_lo;
  rep.gamma_snapped = m0 / rep.m1_hat;
  rep.cost_at_snapped = std::min(cost_lo, cost_hi);
}

}  // namespace

void SystemConfig::validate() const {
  if (m0 < 1) throw ConfigError("m0 must be >= 1");
  if (!(n0 >= 1)) throw ConfigError("n0 must be >= 1");
  if (d < 1) throw ConfigError("d must be >= 1");
  if (omega < 1) throw ConfigError("omega must be >= 1");
  if (!(kappa > 0)) throw ConfigError("kappa must be > 0");
  if (!(epsilon > 0 && epsilon < 1)) throw ConfigError("epsilon must be in (0, 1)");
  if (!(theta >= 0)) throw ConfigError("theta must be >= 0");
  if (!(mu >= 0)) throw ConfigError("mu must be >= 0");
  if (!(alpha > 0)) throw ConfigError("alpha must be > 0");
  if (!(tau >= 1)) throw ConfigError("tau must be >= 1");
}

double rounds_model(double gamma, const SystemConfig& cfg) {
  check_gamma(gamma, cfg);
  return (1.0 + cfg.kappa / (gamma * cfg.n0)) * log2_inv(cfg.epsilon);
}

double traffic_per_round(double m1, double omega) {
  if (m1 < 1) throw ConfigError("m1 must be >= 1");
  return 2.0 * (m1 - 1.0) * omega;
}

double algorithm_traffic(double gamma, const SystemConfig& cfg) {
  return traffic_per_round(static_cast<double>(cfg.m0) / gamma, cfg.omega) *
         rounds_model(gamma, cfg);
}

double data_traffic(double gamma, const SystemConfig& cfg) {
  check_gamma(gamma, cfg);
  return (static_cast<double>(cfg.m0) - static_cast<double>(cfg.m0) / gamma) * cfg.n0 * cfg.d;
}

double compute_ops(double gamma, const SystemConfig& cfg) {
  const double m1 = static_cast<double>(cfg.m0) / gamma;
  return cfg.tau * (gamma * cfg.n0) * (m1 + 1.0) * rounds_model(gamma, cfg);
}

double compute_cost(double gamma, const SystemConfig& cfg) {
  return cfg.beta() * std::pow(gamma, cfg.alpha) * compute_ops(gamma, cfg);
}

CostBreakdown total_cost(double gamma, const SystemConfig& cfg) {
  CostBreakdown b;
  b.rounds = rounds_model(gamma, cfg);
  b.traffic_algorithm = algorithm_traffic(gamma, cfg);
  b.traffic_data = data_traffic(gamma, cfg);
  b.cost_network = cfg.theta * (b.traffic_algorithm + b.traffic_data);
  b.cost_compute = compute_cost(gamma, cfg);
  b.cost_total = b.cost_network + b.cost_compute;
  return b;
}

double kappa_convention(double n_points, double d) {
  if (!(n_points >= 1)) throw ConfigError("n_points must be >= 1");
  return std::sqrt(n_points * d);
}

ClosedFormOptimum closed_form_network_optimum(const SystemConfig& cfg) {
  cfg.validate();
  const double L = log2_inv(cfg.epsilon);
  const double m = cfg.m0, n = cfg.n0, w = cfg.omega, k = cfg.kappa;
  const double denom = cfg.d * m * n * n + 2.0 * k * L * w - 2.0 * L * m * n * w;
  ClosedFormOptimum r;
  if (denom <= 0.0) {
    r.boundary = true;
    return r;
  }
  r.gamma_tilde = 4.0 * k * L * m * w / denom;
  return r;
}

std::vector<double> log_spaced_grid(double lo, double hi, int points) {
  std::vector<double> grid(points);
  const double ua = std::log(lo), ub = std::log(hi);
  for (int i = 0; i < points; ++i) {
    grid[i] = std::exp(ua + (ub - ua) * static_cast<double>(i) / (points - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

OptimumReport numeric_optimum(const SystemConfig& cfg) {
  cfg.validate();
  const double m0 = static_cast<double>(cfg.m0);
  OptimumReport rep;

  // flat cost: every gamma ties, take the decentralised end
  if (cfg.theta == 0.0 && cfg.mu == 0.0) {
    rep.gamma_unclamped = 1.0;
    rep.gamma_hat = 1.0;
    rep.m1_hat = cfg.m0;
    rep.gamma_snapped = 1.0;
    return rep;
  }

  // locate the stationary point over gamma > 0, widening the window until the
  // scan minimum is interior
  constexpr int kScan = 64;
  double lo = std::min(0.25, 1.0 / m0);
  double hi = std::max(4.0 * m0, 16.0);
  double gamma_tilde;
  for (int expansion = 0;; ++expansion) {
    const auto grid = log_spaced_grid(lo, hi, kScan);
    int best = 0;
    double best_cost = raw_total(grid[0], cfg);
    for (int i = 1; i < kScan; ++i) {
      const double cost = raw_total(grid[i], cfg);
      if (cost < best_cost) {
        best_cost = cost;
        best = i;
      }
    }
    if (best == 0 && lo > 1e-9 && expansion < 12) {
      lo /= 64.0;
      continue;
    }
    if (best == kScan - 1 && hi < 1e24 && expansion < 12) {
      hi *= 64.0;
      continue;
    }
    if (best == 0 || best == kScan - 1) {
      gamma_tilde = grid[best];  // monotone over the whole window
    } else {
      gamma_tilde = golden_min_log(cfg, grid[best - 1], grid[best + 1]);
    }
    break;
  }

  rep.gamma_unclamped = gamma_tilde;
  rep.clamped_low = gamma_tilde < 1.0;
  rep.clamped_high = gamma_tilde > m0;
  rep.gamma_hat = std::clamp(gamma_tilde, 1.0, m0);

  // guard for a multimodal constrained landscape: if a scan of [1, m0] beats
  // the clamped stationary point, refine and take that interior minimum
  if (cfg.m0 > 1) {
    const auto grid = log_spaced_grid(1.0, m0, kScan);
    int best = 0;
    double best_cost = raw_total(grid[0], cfg);
    for (int i = 1; i < kScan; ++i) {
      const double cost = raw_total(grid[i], cfg);
      if (cost < best_cost) {
        best_cost = cost;
        best = i;
      }
    }
    if (best_cost < raw_total(rep.gamma_hat, cfg)) {
      rep.gamma_hat = best == 0 || best == kScan - 1
                          ? grid[best]
                          : golden_min_log(cfg, grid[best - 1], grid[best + 1]);
      rep.clamped_low = rep.clamped_high = false;
    }
  }

  rep.cost_at_hat = total_cost(rep.gamma_hat, cfg).cost_total;
  apply_snap(rep, cfg);
  return rep;
}

OptimumReport solve_optimum(const SystemConfig& cfg) {
  OptimumReport rep = numeric_optimum(cfg);
  if (cfg.mu == 0.0 && cfg.theta > 0.0) {
    const ClosedFormOptimum cf = closed_form_network_optimum(cfg);
    if (!cf.boundary) {
      rep.method = "closed_form_network";
      rep.gamma_unclamped = cf.gamma_tilde;
      rep.clamped_low = cf.gamma_tilde < 1.0;
      rep.clamped_high = cf.gamma_tilde > static_cast<double>(cfg.m0);
      rep.gamma_hat = std::clamp(cf.gamma_tilde, 1.0, static_cast<double>(cfg.m0));
      rep.cost_at_hat = total_cost(rep.gamma_hat, cfg).cost_total;
      apply_snap(rep, cfg);
    }
  }
  return rep;
}

std::vector<int> derivative_sign_profile(const SystemConfig& cfg,
                                         std::span<const double> gamma_grid) {
  cfg.validate();
  std::vector<int> signs;
  signs.reserve(gamma_grid.size());
  for (double gamma : gamma_grid) {
    const double h = 1e-6 * gamma;
    const double diff = raw_total(gamma + h, cfg) - raw_total(gamma - h, cfg);
    signs.push_back(diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0));
  }
  return signs;
}

}  // namespace fogplan
