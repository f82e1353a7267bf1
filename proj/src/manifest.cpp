#include "fogplan/manifest.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fogplan {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0' || !std::isfinite(x)) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
  return x;
}

long to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x)) throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  return static_cast<long>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

}  // namespace

ExperimentManifest ExperimentManifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

ExperimentManifest ExperimentManifest::parse(const std::string& text, const std::string& origin) {
  ExperimentManifest m;
  m.source_path = origin;
  m.source_text = text;

  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }

    if (key == "profile") {
      m.profile = value;
    } else if (key == "m0") {
      m.m0 = static_cast<int>(to_int(key, value));
    } else if (key == "n0") {
      m.n0 = to_double(key, value);
    } else if (key == "d") {
      m.d = static_cast<int>(to_int(key, value));
    } else if (key == "omega") {
      m.omega = static_cast<int>(to_int(key, value));
    } else if (key == "kappa") {
      if (value == "auto") {
        m.kappa_auto = true;
      } else {
        m.kappa = to_double(key, value);
        m.kappa_auto = false;
      }
    } else if (key == "epsilon") {
      m.epsilons = to_double_list(key, value);
    } else if (key == "theta") {
      m.theta = to_double(key, value);
    } else if (key == "mu") {
      m.mu = to_double(key, value);
    } else if (key == "alpha") {
      m.alpha = to_double(key, value);
    } else if (key == "tau") {
      if (value == "auto") {
        m.tau_auto = true;
      } else {
        m.tau = to_double(key, value);
        m.tau_auto = false;
      }
    } else if (key == "lambda") {
      m.lambda = to_double(key, value);
    } else if (key == "eta") {
      m.eta = to_double(key, value);
    } else if (key == "max_rounds") {
      m.max_rounds = static_cast<int>(to_int(key, value));
    } else if (key == "standardize") {
      m.standardize = to_bool(key, value);
    } else if (key == "intercept") {
      m.intercept = to_bool(key, value);
    } else if (key == "m1_grid") {
      if (value == "all") {
        m.m1_grid.clear();
      } else {
        m.m1_grid.clear();
        for (double x : to_double_list(key, value)) {
          if (x < 1 || x != std::floor(x)) {
            throw ConfigError("key 'm1_grid': entries must be positive integers");
          }
          m.m1_grid.push_back(static_cast<int>(x));
        }
      }
    } else if (key == "replications") {
      m.replications = static_cast<int>(to_int(key, value));
    } else if (key == "seed") {
      m.seed = static_cast<uint64_t>(to_int(key, value));
    } else if (key == "dataset") {
      m.dataset = value;
    } else if (key == "class_pos") {
      m.class_pos = static_cast<int>(to_int(key, value));
    } else if (key == "class_neg") {
      m.class_neg = static_cast<int>(to_int(key, value));
    } else if (key == "train_fraction") {
      m.train_fraction = to_double(key, value);
    } else if (key == "axis") {
      m.axis = value;
    } else if (key == "axis_values") {
      m.axis_values = to_double_list(key, value);
    } else if (key == "alphas") {
      m.alphas = to_double_list(key, value);
    } else if (key == "long_run") {
      m.long_run = to_bool(key, value);
    } else if (key == "dump_traces") {
      m.dump_traces = to_bool(key, value);
    } else if (key == "dump_shards") {
      m.dump_shards = to_bool(key, value);
    } else {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  m.validate();
  return m;
}

void ExperimentManifest::validate() const {
  if (m0 < 1) throw ConfigError("key 'm0': must be >= 1");
  if (!(n0 >= 1)) throw ConfigError("key 'n0': must be >= 1");
  if (d < 1) throw ConfigError("key 'd': must be >= 1");
  if (omega < 0) throw ConfigError("key 'omega': must be >= 1");
  if (!kappa_auto && !(kappa > 0)) throw ConfigError("key 'kappa': must be > 0 or auto");
  if (epsilons.empty()) throw ConfigError("key 'epsilon': must list at least one value");
  for (double e : epsilons) {
    if (!(e > 0 && e < 1)) throw ConfigError("key 'epsilon': values must be in (0, 1)");
  }
  if (!(theta >= 0)) throw ConfigError("key 'theta': must be >= 0");
  if (!(mu >= 0)) throw ConfigError("key 'mu': must be >= 0");
  if (!(alpha > 0)) throw ConfigError("key 'alpha': must be > 0");
  if (!tau_auto && !(tau >= 1)) throw ConfigError("key 'tau': must be >= 1 or auto");
  if (lambda < 0) throw ConfigError("key 'lambda': must be >= 0");
  if (!(eta > 0)) throw ConfigError("key 'eta': must be > 0");
  if (max_rounds < 1) throw ConfigError("key 'max_rounds': must be >= 1");
  for (int m1 : m1_grid) {
    if (m1 < 1 || m1 > m0) throw ConfigError("key 'm1_grid': entries must be in [1, m0]");
  }
  if (replications < 1) throw ConfigError("key 'replications': must be >= 1");
  if (class_pos < 1 || class_pos > 7) throw ConfigError("key 'class_pos': must be in 1..7");
  if (class_neg < 1 || class_neg > 7) throw ConfigError("key 'class_neg': must be in 1..7");
  if (class_pos == class_neg) throw ConfigError("key 'class_neg': classes must differ");
  if (!(train_fraction > 0 && train_fraction < 1)) {
    throw ConfigError("key 'train_fraction': must be in (0, 1)");
  }
  if (!axis.empty() && axis != "n0" && axis != "m0" && axis != "mu" && axis != "alpha") {
    throw ConfigError("key 'axis': must be one of n0, m0, mu, alpha");
  }
  for (double a : alphas) {
    if (!(a > 0)) throw ConfigError("key 'alphas': values must be > 0");
  }
}

double ExperimentManifest::resolved_kappa() const {
  if (!kappa_auto) return kappa;
  return std::sqrt(static_cast<double>(m0) * n0 * static_cast<double>(d));
}

double ExperimentManifest::resolved_tau() const {
  return tau_auto ? static_cast<double>(resolved_omega()) : tau;
}

SystemConfig ExperimentManifest::system_config(double epsilon) const {
  SystemConfig cfg;
  cfg.m0 = m0;
  cfg.n0 = n0;
  cfg.d = d;
  cfg.omega = resolved_omega();
  cfg.kappa = resolved_kappa();
  cfg.epsilon = epsilon;
  cfg.theta = theta;
  cfg.mu = mu;
  cfg.alpha = alpha;
  cfg.tau = resolved_tau();
  cfg.validate();
  return cfg;
}

LearnerConfig ExperimentManifest::learner_config(double epsilon) const {
  LearnerConfig cfg;
  cfg.lambda = lambda;
  cfg.eta = eta;
  cfg.epsilon = epsilon;
  cfg.max_rounds = max_rounds;
  cfg.tau = resolved_tau();
  cfg.omega = model_dim();
  cfg.validate();
  return cfg;
}

}  // namespace fogplan
