// fogplan: evaluates the aggregation-level cost model, solves for the optimal
// number of collection points, and validates the model by sweeping DSVRG runs
// over a dataset. Subcommands: curve, optimize, sweep, report, sensitivity.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fogplan/cost_model.hpp"
#include "fogplan/dataset.hpp"
#include "fogplan/dsvrg.hpp"
#include "fogplan/manifest.hpp"
#include "fogplan/rng.hpp"
#include "fogplan/shards.hpp"
#include "fogplan/sweep.hpp"
#include "fogplan/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace fogplan;

namespace {

constexpr uint64_t kSplitStreamTag = 0x73706c6974ULL;

// shortest round-trip decimal form, so artifacts are byte-stable
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string eps_tag(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eps);
  return buf;
}

void write_text(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInputError("missing file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_provenance(const fs::path& out_dir, const ExperimentManifest& m,
                      const std::string& command, uint64_t seed) {
  write_text(out_dir / "manifest.copy", m.source_text);
  json info;
  info["tool"] = "fogplan";
  info["version"] = kVersion;
  info["command"] = command;
  info["profile"] = m.profile;
  info["seed"] = seed;
  write_text(out_dir / "run_info.json", info.dump(2) + "\n");
}

std::vector<int> level_grid(const ExperimentManifest& m) {
  if (!m.m1_grid.empty()) return m.m1_grid;
  std::vector<int> all(m.m0);
  for (int i = 0; i < m.m0; ++i) all[i] = m.m0 - i;  // descending m1 = ascending gamma
  return all;
}

json optimum_to_json(const OptimumReport& rep, const SystemConfig& cfg) {
  json j;
  j["epsilon"] = cfg.epsilon;
  j["method"] = rep.method;
  j["gamma_unclamped"] = rep.gamma_unclamped;
  j["gamma_hat"] = rep.gamma_hat;
  j["m1_hat"] = rep.m1_hat;
  j["gamma_snapped"] = rep.gamma_snapped;
  j["cost_at_hat"] = rep.cost_at_hat;
  j["cost_at_snapped"] = rep.cost_at_snapped;
  j["clamped_low"] = rep.clamped_low;
  j["clamped_high"] = rep.clamped_high;
  if (cfg.mu == 0.0) {
    const auto cf = closed_form_network_optimum(cfg);
    json c;
    c["boundary"] = cf.boundary;
    if (!cf.boundary) c["gamma_tilde"] = cf.gamma_tilde;
    j["closed_form"] = c;
  }
  return j;
}

int cmd_curve(const ExperimentManifest& m, const fs::path& out_dir, uint64_t seed) {
  write_provenance(out_dir, m, "curve", seed);
  const auto levels = level_grid(m);
  for (double eps : m.epsilons) {
    const SystemConfig cfg = m.system_config(eps);
    std::string csv =
        "gamma,m1,rounds,traffic_algorithm,traffic_data,cost_network,cost_compute,cost_total\n";
    for (int m1 : levels) {
      const double gamma = static_cast<double>(cfg.m0) / m1;
      const CostBreakdown b = total_cost(gamma, cfg);
      csv += fmt(gamma) + ',' + std::to_string(m1) + ',' + fmt(b.rounds) + ',' +
             fmt(b.traffic_algorithm) + ',' + fmt(b.traffic_data) + ',' + fmt(b.cost_network) +
             ',' + fmt(b.cost_compute) + ',' + fmt(b.cost_total) + '\n';
    }
    write_text(out_dir / ("curve_eps" + eps_tag(eps) + ".csv"), csv);
  }
  std::cout << "curve: wrote " << m.epsilons.size() << " file(s) to " << out_dir << "\n";
  return 0;
}

void write_sensitivity(const ExperimentManifest& m, const fs::path& out_dir) {
  const SystemConfig base = m.system_config(m.epsilons.front());
  const auto rows = sensitivity_sweep(base, m.axis, m.axis_values, m.alphas);
  std::string csv = m.axis;
  if (m.axis == "alpha") {
    csv += ",gamma_hat,gamma_unclamped\n";
  } else {
    for (double a : m.alphas) csv += ",gamma_hat_alpha" + eps_tag(a);
    for (double a : m.alphas) csv += ",gamma_unclamped_alpha" + eps_tag(a);
    csv += '\n';
  }
  for (const auto& row : rows) {
    csv += fmt(row.value);
    for (double g : row.gamma_hat) csv += ',' + fmt(g);
    for (double g : row.gamma_unclamped) csv += ',' + fmt(g);
    csv += '\n';
  }
  write_text(out_dir / ("sensitivity_" + m.axis + ".csv"), csv);
}

int cmd_optimize(const ExperimentManifest& m, const fs::path& out_dir, uint64_t seed) {
  write_provenance(out_dir, m, "optimize", seed);
  for (double eps : m.epsilons) {
    const SystemConfig cfg = m.system_config(eps);
    const OptimumReport rep = solve_optimum(cfg);
    write_text(out_dir / ("optimum_eps" + eps_tag(eps) + ".json"),
               optimum_to_json(rep, cfg).dump(2) + "\n");
  }
  if (!m.axis.empty()) write_sensitivity(m, out_dir);  // sensitivity manifests delegate
  std::cout << "optimize: wrote " << m.epsilons.size() << " report(s) to " << out_dir << "\n";
  return 0;
}

int cmd_sensitivity(const ExperimentManifest& m, const fs::path& out_dir, uint64_t seed) {
  if (m.axis.empty()) throw ConfigError("key 'axis': required for the sensitivity command");
  write_provenance(out_dir, m, "sensitivity", seed);
  write_sensitivity(m, out_dir);
  std::cout << "sensitivity: wrote " << (out_dir / ("sensitivity_" + m.axis + ".csv")) << "\n";
  return 0;
}

std::string sweep_csv(const SweepResult& result) {
  std::string csv =
      "gamma,m1,replications,failures,rounds_mean,rounds_ci,cost_network_mean,cost_network_ci,"
      "cost_compute_mean,cost_compute_ci,cost_total_mean,cost_total_ci\n";
  for (const auto& r : result.rows) {
    csv += fmt(r.gamma) + ',' + std::to_string(r.m1) + ',' + std::to_string(r.replications) +
           ',' + std::to_string(r.failures) + ',' + fmt(r.rounds_mean) + ',' + fmt(r.rounds_ci) +
           ',' + fmt(r.cost_network_mean) + ',' + fmt(r.cost_network_ci) + ',' +
           fmt(r.cost_compute_mean) + ',' + fmt(r.cost_compute_ci) + ',' +
           fmt(r.cost_total_mean) + ',' + fmt(r.cost_total_ci) + '\n';
  }
  return csv;
}

json sweep_summary(const SweepResult& result, double eps, uint64_t seed, int replications) {
  json j;
  j["epsilon"] = eps;
  j["seed"] = seed;
  j["replications"] = replications;
  j["gamma_star"] = result.gamma_star;
  j["m1_star"] = result.m1_star;
  j["gamma_hat"] = result.gamma_hat;
  j["m1_hat"] = result.m1_hat;
  j["gamma_hat_unclamped"] = result.gamma_hat_unclamped;
  j["overhead_pct"] = result.overhead_pct;
  j["gain_vs_decentralised_pct"] = result.gain_vs_decentralised_pct;
  j["gain_vs_centralised_pct"] = result.gain_vs_centralised_pct;
  j["total_failures"] = result.total_failures;
  j["rows"] = result.rows.size();
  return j;
}

int cmd_sweep(const ExperimentManifest& m, const fs::path& out_dir, uint64_t seed,
              bool long_ack) {
  if (m.long_run && !long_ack) {
    throw ConfigError("manifest '" + m.profile +
                      "' is marked long_run; pass --long to acknowledge the runtime");
  }
  if (m.dataset.empty()) throw ConfigError("key 'dataset': required for the sweep command");
  if (!fs::exists(m.dataset)) throw MissingInputError("dataset not found: " + m.dataset);

  write_provenance(out_dir, m, "sweep", seed);

  const LabeledDataset full = load_covtype(m.dataset);
  const LabeledDataset binary = filter_binary(full, m.class_pos, m.class_neg);
  auto [train, test] = split_train_test(binary, m.train_fraction, mix_seed(seed, kSplitStreamTag));
  if (m.standardize) standardize_features(train, &test);
  std::cout << "dataset: " << full.rows() << " rows, classes " << m.class_pos << "/"
            << m.class_neg << " -> " << binary.rows() << " rows, " << train.rows()
            << " train / " << test.rows() << " test\n";

  if (m.dump_shards) {
    for (int r = 0; r < m.replications; ++r) {
      const ShardSet shards =
          partition_poisson(train, m.m0, m.n0, mix_seed(seed, kPartitionStreamTag, r));
      json j = json::array();
      for (const auto& s : shards.shards) j.push_back(s);
      write_text(out_dir / ("shards_rep" + std::to_string(r) + ".json"), j.dump() + "\n");
    }
  }

  for (double eps : m.epsilons) {
    const auto t0 = std::chrono::steady_clock::now();
    const SystemConfig sys = m.system_config(eps);
    const LearnerConfig learner = m.learner_config(eps);
    std::vector<CellTrace> traces;
    const SweepResult result = sweep_gamma(train, sys, learner, m.m1_grid, m.replications,
                                           seed, m.dump_traces ? &traces : nullptr);
    const std::string tag = eps_tag(eps);
    write_text(out_dir / ("sweep_eps" + tag + ".csv"), sweep_csv(result));
    write_text(out_dir / ("summary_eps" + tag + ".json"),
               sweep_summary(result, eps, seed, m.replications).dump(2) + "\n");
    std::string plot = "gamma,cost_total_mean\n";
    for (const auto& r : result.rows) {
      if (r.replications > 0) plot += fmt(r.gamma) + ',' + fmt(r.cost_total_mean) + '\n';
    }
    write_text(out_dir / ("plot_eps" + tag + ".csv"), plot);
    if (m.dump_traces) {
      json arr = json::array();
      for (const auto& cell : traces) {
        json t;
        t["m1"] = cell.m1;
        t["rep"] = cell.rep;
        t["ok"] = cell.ok;
        t["rounds"] = cell.trace.rounds;
        t["converged"] = cell.trace.converged;
        t["gradient_evals"] = cell.trace.gradient_evals;
        t["flops"] = cell.trace.flops;
        t["messages"] = cell.trace.messages;
        t["grad_norm_history"] = cell.trace.grad_norm_history;
        arr.push_back(std::move(t));
      }
      write_text(out_dir / ("traces_eps" + tag + ".json"), arr.dump() + "\n");
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "sweep eps=" << tag << ": gamma*=" << result.gamma_star
              << " gamma_hat=" << result.gamma_hat << " overhead=" << result.overhead_pct
              << "% failures=" << result.total_failures << " (" << secs << "s)\n";
  }
  return 0;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw Error("column '" + name + "' missing from table");
  }
};

CsvTable read_csv(const fs::path& path) {
  const std::string text = read_text(path);
  CsvTable t;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (t.header.empty()) {
      t.header = fields;
      continue;
    }
    std::vector<double> row;
    for (const auto& s : fields) row.push_back(std::strtod(s.c_str(), nullptr));
    t.rows.push_back(std::move(row));
  }
  return t;
}

int cmd_report(const fs::path& sweep_dir, const fs::path& model_dir, const fs::path& out_dir) {
  const std::string sweep_manifest = read_text(sweep_dir / "manifest.copy");
  const std::string model_manifest = read_text(model_dir / "manifest.copy");
  if (sweep_manifest != model_manifest) {
    std::cerr << "manifest mismatch between artifact sets; differing lines:\n";
    std::stringstream a(sweep_manifest), b(model_manifest);
    std::string la, lb;
    int n = 0;
    while (true) {
      const bool ga = static_cast<bool>(std::getline(a, la));
      const bool gb = static_cast<bool>(std::getline(b, lb));
      if (!ga && !gb) break;
      ++n;
      if (!ga) la.clear();
      if (!gb) lb.clear();
      if (la != lb) {
        std::cerr << "  line " << n << ": sweep '" << la << "' vs model '" << lb << "'\n";
      }
    }
    throw ConfigError("report: sweep and model artifacts come from different manifests");
  }

  const ExperimentManifest m = ExperimentManifest::parse(sweep_manifest, "manifest.copy");
  fs::create_directories(out_dir);

  std::string validation =
      "epsilon,gamma_star,gamma_hat,rounds_at_star,rounds_at_hat,cost_at_star,cost_at_hat,"
      "overhead_pct\n";
  std::string gains =
      "epsilon,gamma_hat,cost_at_decentralised,cost_at_hat,cost_at_centralised,"
      "gain_vs_decentralised_pct,gain_vs_centralised_pct\n";

  for (double eps : m.epsilons) {
    const std::string tag = eps_tag(eps);
    const CsvTable rows = read_csv(sweep_dir / ("sweep_eps" + tag + ".csv"));
    const json summary = json::parse(read_text(sweep_dir / ("summary_eps" + tag + ".json")));
    const json model = json::parse(read_text(model_dir / ("optimum_eps" + tag + ".json")));

    const int c_gamma = rows.col("gamma"), c_m1 = rows.col("m1"), c_reps = rows.col("replications"),
              c_rounds = rows.col("rounds_mean"), c_total = rows.col("cost_total_mean");
    const int m1_hat = model["m1_hat"].get<int>();
    const double gamma_hat = model["gamma_snapped"].get<double>();
    if (summary["m1_hat"].get<int>() != m1_hat) {
      throw ConfigError("report: sweep summary and model artifact disagree on m1_hat");
    }

    const std::vector<double>* star = nullptr;
    const std::vector<double>* hat = nullptr;
    const std::vector<double>* at_one = nullptr;
    const std::vector<double>* at_m0 = nullptr;
    for (const auto& row : rows.rows) {
      if (row[c_reps] <= 0) continue;
      if (!star || row[c_total] < (*star)[c_total]) star = &row;
      if (static_cast<int>(row[c_m1]) == m1_hat) hat = &row;
      if (row[c_gamma] == 1.0) at_one = &row;
      if (static_cast<int>(row[c_m1]) == 1) at_m0 = &row;
    }
    if (!star) throw Error("report: no surviving rows in sweep_eps" + tag + ".csv");
    if (!hat) throw Error("report: sweep has no row at the model optimum m1=" +
                          std::to_string(m1_hat));

    const double overhead = 100.0 * ((*hat)[c_total] - (*star)[c_total]) / (*star)[c_total];
    validation += tag + ',' + fmt((*star)[c_gamma]) + ',' + fmt(gamma_hat) + ',' +
                  fmt((*star)[c_rounds]) + ',' + fmt((*hat)[c_rounds]) + ',' +
                  fmt((*star)[c_total]) + ',' + fmt((*hat)[c_total]) + ',' + fmt(overhead) + '\n';

    if (at_one && at_m0) {
      const double c1 = (*at_one)[c_total], cm = (*at_m0)[c_total], ch = (*hat)[c_total];
      gains += tag + ',' + fmt(gamma_hat) + ',' + fmt(c1) + ',' + fmt(ch) + ',' + fmt(cm) + ',' +
               fmt(100.0 * (c1 - ch) / c1) + ',' + fmt(100.0 * (cm - ch) / cm) + '\n';
    }
  }

  write_text(out_dir / "validation_table.csv", validation);
  write_text(out_dir / "gain_table.csv", gains);
  std::cout << "report: wrote validation_table.csv and gain_table.csv to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aggregation-level planning for decentralised learning (DSVRG cost model)"};
  app.require_subcommand(1);

  std::string manifest_path, out_path, sweep_dir, model_dir;
  int64_t seed_override = -1;
  bool long_ack = false;

  auto add_common = [&](CLI::App* cmd, bool needs_manifest = true) {
    if (needs_manifest) {
      cmd->add_option("-m,--manifest", manifest_path, "experiment manifest")->required();
    }
    cmd->add_option("-o,--out", out_path, "output directory")->required();
    cmd->add_option("--seed", seed_override, "override the manifest seed");
  };

  auto* curve = app.add_subcommand("curve", "evaluate the model cost curve per epsilon");
  add_common(curve);
  auto* optimize = app.add_subcommand("optimize", "solve for the optimal aggregation level");
  add_common(optimize);
  auto* sweep = app.add_subcommand("sweep", "run the empirical DSVRG sweep");
  add_common(sweep);
  sweep->add_flag("--long", long_ack, "acknowledge a long_run manifest");
  auto* report = app.add_subcommand("report", "model vs empirical comparison tables");
  report->add_option("--sweep-dir", sweep_dir, "directory written by 'sweep'")->required();
  report->add_option("--model-dir", model_dir, "directory written by 'optimize'")->required();
  report->add_option("-o,--out", out_path, "output directory")->required();
  auto* sensitivity = app.add_subcommand("sensitivity", "optimal level along a parameter axis");
  add_common(sensitivity);

  try {
    app.parse(argc, argv);

    if (report->parsed()) return cmd_report(sweep_dir, model_dir, out_path);

    if (!fs::exists(manifest_path)) {
      throw MissingInputError("manifest not found: " + manifest_path);
    }
    const ExperimentManifest m = ExperimentManifest::load(manifest_path);
    const uint64_t seed = seed_override >= 0 ? static_cast<uint64_t>(seed_override) : m.seed;

    if (curve->parsed()) return cmd_curve(m, out_path, seed);
    if (optimize->parsed()) return cmd_optimize(m, out_path, seed);
    if (sweep->parsed()) return cmd_sweep(m, out_path, seed, long_ack);
    if (sensitivity->parsed()) return cmd_sensitivity(m, out_path, seed);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems are validation errors
  } catch (const MissingInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
