// SPDX-License-Identifier: Apache-2.0
//
// Experiment driver CLI. Subcommands:
//   run <config.json>         seeded Monte Carlo comparison, CSV/JSON out
//   sweep-dof <config.json>   run + per-algorithm sum-rate slope in bits/decade
//   pareto <config.json>      2-link MISO Pareto boundary as CSV
//   verify-golden <record...> rerun checked-in goldens and compare

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "icbeam/icbeam.hpp"

namespace {

using namespace icbeam;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> trials;
  std::optional<int> workers;
};

ExperimentConfig load_with_overrides(const std::string& path, const Overrides& o) {
  ExperimentConfig config = load_experiment_config(path);
  if (o.seed) config.base_seed = *o.seed;
  if (o.out) config.output_path = *o.out;
  if (o.format) config.output_format = *o.format;
  if (o.trials) config.n_trials = *o.trials;
  if (o.workers) config.n_workers = *o.workers;
  config.validate();
  return config;
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output path: " + path);
  out << text;
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

int cmd_run(const std::string& config_path, const Overrides& o) {
  const ExperimentConfig config = load_with_overrides(config_path, o);
  const SweepResult sweep = run_experiment(config);
  if (config.output_format == "json") {
    write_or_print(to_json(sweep).dump(2) + "\n", config.output_path);
  } else {
    write_or_print(to_csv(sweep), config.output_path);
  }
  if (!config.output_path.empty()) {
    std::cerr << "wrote " << config.output_path << " (" << sweep.cells.size() << " cells)\n";
  }
  return 0;
}

int cmd_sweep_dof(const std::string& config_path, const Overrides& o) {
  const ExperimentConfig config = load_with_overrides(config_path, o);
  const SweepResult sweep = run_experiment(config);
  const double lo = config.slope_lo_db.value_or(config.snr_sweep_db.front());
  const double hi = config.slope_hi_db.value_or(config.snr_sweep_db.back());
  std::string csv = "algorithm,snr_lo_db,snr_hi_db,slope_bits_per_decade\n";
  for (Algorithm a : config.algorithms) {
    const double slope = dof_slope(sweep, a, lo, hi);
    csv += algorithm_name(a);
    csv += ',';
    csv += format_double(lo);
    csv += ',';
    csv += format_double(hi);
    csv += ',';
    csv += format_double(slope);
    csv += '\n';
    std::cerr << algorithm_name(a) << ": " << slope << " bits/decade over [" << lo << ", "
              << hi << "] dB\n";
  }
  write_or_print(csv, config.output_path);
  return 0;
}

CVector channel_from_json(const Json& j) {
  CVector h(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    h[static_cast<Eigen::Index>(k)] = Complex(j[k].at(0).get<double>(), j[k].at(1).get<double>());
  }
  return h;
}

int cmd_pareto(const std::string& config_path, const Overrides& o) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError("cannot open config file: " + config_path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }

  MisoScenario scenario;
  scenario.rho = j.value("rho", 1.0);
  if (j.contains("channels")) {
    const Json& c = j["channels"];
    scenario.h11 = channel_from_json(c.at("h11"));
    scenario.h12 = channel_from_json(c.at("h12"));
    scenario.h21 = channel_from_json(c.at("h21"));
    scenario.h22 = channel_from_json(c.at("h22"));
  } else {
    const int n_tx = j.at("n_tx").get<int>();
    std::uint64_t seed = j.value("seed", std::uint64_t{1});
    if (o.seed) seed = *o.seed;
    Rng rng(seed);
    scenario.h11 = sample_complex_gaussian(n_tx, 1, rng);
    scenario.h12 = sample_complex_gaussian(n_tx, 1, rng);
    scenario.h21 = sample_complex_gaussian(n_tx, 1, rng);
    scenario.h22 = sample_complex_gaussian(n_tx, 1, rng);
  }
  const int n_points = j.value("n_points", 64);
  const BoundarySolution solution = solve_boundary(scenario, n_points);
  if (!solution.warning.empty()) std::cerr << "warning: " << solution.warning << "\n";
  if (!solution.skipped_zeta1.empty()) {
    std::cerr << "note: " << solution.skipped_zeta1.size()
              << " zeta1 grid points had no boundary root\n";
  }

  std::string csv = "zeta1,zeta2,gamma1,gamma2,rate1,rate2\n";
  for (const auto& p : solution.points) {
    csv += format_double(p.zeta1);
    csv += ',';
    csv += format_double(p.zeta2);
    csv += ',';
    csv += format_double(p.gamma1);
    csv += ',';
    csv += format_double(p.gamma2);
    csv += ',';
    csv += format_double(std::log2(1.0 + p.gamma1));
    csv += ',';
    csv += format_double(std::log2(1.0 + p.gamma2));
    csv += '\n';
  }
  std::string out_path = j.contains("output") ? j["output"].value("path", "") : "";
  if (o.out) out_path = *o.out;
  write_or_print(csv, out_path);
  if (!out_path.empty()) {
    std::cerr << "wrote " << out_path << " (" << solution.points.size() << " points)\n";
  }
  return 0;
}

int cmd_verify_golden(const std::vector<std::string>& records) {
  int failures = 0;
  for (const auto& path : records) {
    const GoldenRecord record = load_golden_record(path);
    const GoldenReport report = verify_golden(record);
    std::cout << report.summary() << "\n";
    for (const auto& failure : report.failures) std::cout << "  " << failure << "\n";
    if (!report.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coordinated beamforming benchmark harness for the MIMO interference channel"};
  app.require_subcommand(1);

  Overrides o;
  std::string config_path;
  std::vector<std::string> record_paths;

  auto add_overrides = [&](CLI::App* cmd, bool with_format) {
    cmd->add_option("--seed", o.seed, "override the base seed");
    cmd->add_option("--out", o.out, "override the output path");
    if (with_format) cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--trials", o.trials, "override the trial count");
    cmd->add_option("--workers", o.workers, "override the worker count");
  };

  CLI::App* run = app.add_subcommand("run", "run a Monte Carlo comparison");
  run->add_option("config", config_path, "experiment config JSON")->required();
  add_overrides(run, true);

  CLI::App* sweep_dof = app.add_subcommand("sweep-dof", "run and report sum-rate slopes");
  sweep_dof->add_option("config", config_path, "experiment config JSON")->required();
  add_overrides(sweep_dof, false);

  CLI::App* pareto = app.add_subcommand("pareto", "trace a 2-link MISO Pareto boundary");
  pareto->add_option("config", config_path, "pareto config JSON")->required();
  pareto->add_option("--seed", o.seed, "override the scenario seed");
  pareto->add_option("--out", o.out, "override the output path");

  CLI::App* golden = app.add_subcommand("verify-golden", "verify golden records");
  golden->add_option("records", record_paths, "golden record JSON files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, o);
    if (sweep_dof->parsed()) return cmd_sweep_dof(config_path, o);
    if (pareto->parsed()) return cmd_pareto(config_path, o);
    if (golden->parsed()) return cmd_verify_golden(record_paths);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
