// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "icbeam/algorithms.hpp"
#include "icbeam/network.hpp"

namespace icbeam {

using Json = nlohmann::json;

/// Shortest decimal representation that round-trips the exact double.
inline std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

/// Monte Carlo comparison description. The scenario template fixes the
/// layout; the sweep realizes it at each SNR point by scaling the noise
/// powers (per-link offsets make the layout asymmetric).
struct ExperimentConfig {
  std::string name;
  int n_links = 0;
  int n_tx = 0;
  int n_rx = 0;
  double power = 1.0;
  std::vector<double> snr_offsets_db;  // per-link, added to the sweep SNR
  std::vector<double> sir_linear;      // per-link linear SIR targets
  std::vector<double> snr_sweep_db;
  std::vector<Algorithm> algorithms;
  int n_trials = 50;
  std::uint64_t base_seed = 1;
  InitMode init_mode = InitMode::RandomUniformSphere;
  AlgorithmSettings settings;
  int n_workers = 1;
  std::string output_path;
  std::string output_format = "csv";
  std::optional<double> slope_lo_db;  // used by the DoF-slope subcommand
  std::optional<double> slope_hi_db;

  void validate() const {
    if (n_links < 1 || n_tx < 1 || n_rx < 1) {
      throw ConfigError("ExperimentConfig: all antenna/link counts must be >= 1");
    }
    if (n_trials < 1) throw ConfigError("ExperimentConfig: trials must be >= 1");
    if (snr_sweep_db.empty()) throw ConfigError("ExperimentConfig: sweep must be nonempty");
    if (algorithms.empty()) throw ConfigError("ExperimentConfig: algorithm set must be nonempty");
    if (static_cast<int>(snr_offsets_db.size()) != n_links) {
      throw ConfigError("ExperimentConfig: snr_offsets_db must have n_links entries");
    }
    if (static_cast<int>(sir_linear.size()) != n_links) {
      throw ConfigError("ExperimentConfig: sir_linear must have n_links entries");
    }
    if (n_workers < 1) throw ConfigError("ExperimentConfig: workers must be >= 1");
    if (output_format != "csv" && output_format != "json") {
      throw ConfigError("ExperimentConfig: format must be csv or json");
    }
  }
};

/// Scenario realized at one sweep point.
inline ScenarioConfig scenario_at_snr(const ExperimentConfig& config, double snr_db) {
  ScenarioConfig s;
  s.n_links = config.n_links;
  s.n_tx_antennas = config.n_tx;
  s.n_rx_antennas = config.n_rx;
  s.power = config.power;
  s.direct_gains.assign(static_cast<std::size_t>(config.n_links), 1.0);
  s.sir_targets = config.sir_linear;
  s.noise_powers.resize(static_cast<std::size_t>(config.n_links));
  for (int i = 0; i < config.n_links; ++i) {
    s.noise_powers[i] = config.power / db_to_linear(snr_db + config.snr_offsets_db[i]);
  }
  s.rng_seed = config.base_seed;
  s.settings = config.settings;
  return s;
}

/// Per-trial substreams: trial -> (channel, init). Channels and the shared
/// initial profile are identical across SNR points and algorithms of one
/// trial; adding trials or sweep points never perturbs existing ones.
inline std::uint64_t experiment_channel_seed(std::uint64_t base_seed, int trial) {
  return Rng::derive(Rng::derive(base_seed, static_cast<std::uint64_t>(trial)), 0);
}
inline std::uint64_t experiment_init_seed(std::uint64_t base_seed, int trial) {
  return Rng::derive(Rng::derive(base_seed, static_cast<std::uint64_t>(trial)), 1);
}

/// The exact shared state one trial hands to every algorithm.
struct TrialContext {
  ChannelSet channels;
  BeamformerProfile init;
};

inline TrialContext make_trial_context(const ExperimentConfig& config, int trial,
                                       double snr_db) {
  const ScenarioConfig scenario = scenario_at_snr(config, snr_db);
  Rng channel_rng(experiment_channel_seed(config.base_seed, trial));
  Rng init_rng(experiment_init_seed(config.base_seed, trial));
  TrialContext ctx{realize_channels(scenario, channel_rng), {}};
  ctx.init = initialize_profile(ctx.channels, config.init_mode, init_rng);
  return ctx;
}

/// Aggregated statistics of one (SNR, algorithm) cell.
struct SweepCell {
  double snr_db = 0.0;
  Algorithm algorithm = Algorithm::DbaRf;
  double mean_sum_rate = 0.0;
  double stderr_sum_rate = 0.0;  // standard error of the mean
  double mean_iterations = 0.0;
  double convergence_fraction = 0.0;
  double mean_leakage = 0.0;  // mean relative IA residual
  int n_trials = 0;
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<SweepCell> cells;  // SNR-major, algorithm order as configured

  const SweepCell& cell(double snr_db, Algorithm algorithm) const {
    for (const auto& c : cells) {
      if (c.snr_db == snr_db && c.algorithm == algorithm) return c;
    }
    throw ConfigError("SweepResult: no cell for requested (snr, algorithm)");
  }
};

namespace detail {

struct TrialOutcome {
  double sum_rate = 0.0;
  double iterations = 0.0;
  bool converged = false;
  double relative_leakage = 0.0;
};

inline TrialOutcome run_one(Algorithm algorithm, const TrialContext& ctx,
                            const AlgorithmSettings& settings) {
  const AlgorithmResult result = run_algorithm(algorithm, ctx.channels, ctx.init, settings);
  TrialOutcome outcome;
  outcome.sum_rate = sum_rate(ctx.channels, result.profile);
  outcome.iterations = static_cast<double>(result.iterations_used);
  outcome.converged = result.converged;
  outcome.relative_leakage = ia_residual(ctx.channels, result.profile).relative;
  return outcome;
}

}  // namespace detail

/// Runs the full paired Monte Carlo comparison. Trials are independent and
/// may execute on several workers; per-cell reduction always happens in
/// trial order, so the result is bit-identical for any worker count.
inline SweepResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const int n_snr = static_cast<int>(config.snr_sweep_db.size());
  const int n_alg = static_cast<int>(config.algorithms.size());
  // outcomes[trial][snr_index * n_alg + alg_index]
  std::vector<std::vector<detail::TrialOutcome>> outcomes(
      static_cast<std::size_t>(config.n_trials));

  std::atomic<int> next_trial{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (;;) {
      const int trial = next_trial.fetch_add(1);
      if (trial >= config.n_trials) return;
      try {
        std::vector<detail::TrialOutcome> row(static_cast<std::size_t>(n_snr) * n_alg);
        for (int s = 0; s < n_snr; ++s) {
          const TrialContext ctx = make_trial_context(config, trial, config.snr_sweep_db[s]);
          for (int a = 0; a < n_alg; ++a) {
            row[static_cast<std::size_t>(s) * n_alg + a] =
                detail::run_one(config.algorithms[a], ctx, config.settings);
          }
        }
        outcomes[static_cast<std::size_t>(trial)] = std::move(row);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int n_threads = std::min(config.n_workers, config.n_trials);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& thread : threads) thread.join();
  }
  if (failure) std::rethrow_exception(failure);

  SweepResult result;
  result.config = config;
  result.cells.reserve(static_cast<std::size_t>(n_snr) * n_alg);
  for (int s = 0; s < n_snr; ++s) {
    for (int a = 0; a < n_alg; ++a) {
      SweepCell cell;
      cell.snr_db = config.snr_sweep_db[s];
      cell.algorithm = config.algorithms[a];
      cell.n_trials = config.n_trials;
      double mean = 0.0;
      for (int t = 0; t < config.n_trials; ++t) {
        const auto& o = outcomes[t][static_cast<std::size_t>(s) * n_alg + a];
        mean += o.sum_rate;
        cell.mean_iterations += o.iterations;
        cell.convergence_fraction += o.converged ? 1.0 : 0.0;
        cell.mean_leakage += o.relative_leakage;
      }
      mean /= config.n_trials;
      cell.mean_iterations /= config.n_trials;
      cell.convergence_fraction /= config.n_trials;
      cell.mean_leakage /= config.n_trials;
      cell.mean_sum_rate = mean;
      if (config.n_trials > 1) {
        double ss = 0.0;
        for (int t = 0; t < config.n_trials; ++t) {
          const double d = outcomes[t][static_cast<std::size_t>(s) * n_alg + a].sum_rate - mean;
          ss += d * d;
        }
        cell.stderr_sum_rate =
            std::sqrt(ss / (config.n_trials - 1)) / std::sqrt(double(config.n_trials));
      }
      result.cells.push_back(cell);
    }
  }
  return result;
}

/// High-SNR sum-rate slope in bits per decade over [snr_lo_db, snr_hi_db].
/// Two sweep points give the two-point slope; more give the least-squares
/// fit. Both endpoints must be sweep points.
inline double dof_slope(const SweepResult& sweep, Algorithm algorithm, double snr_lo_db,
                        double snr_hi_db) {
  bool lo_found = false, hi_found = false;
  std::vector<std::pair<double, double>> points;  // (decades, rate)
  for (const auto& c : sweep.cells) {
    if (c.algorithm != algorithm) continue;
    if (c.snr_db == snr_lo_db) lo_found = true;
    if (c.snr_db == snr_hi_db) hi_found = true;
    if (c.snr_db >= snr_lo_db && c.snr_db <= snr_hi_db) {
      points.emplace_back(c.snr_db / 10.0, c.mean_sum_rate);
    }
  }
  if (!lo_found || !hi_found) {
    throw ConfigError("dof_slope: both endpoints must be sweep points");
  }
  if (points.size() == 2) {
    return (points[1].second - points[0].second) / (points[1].first - points[0].first);
  }
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= points.size();
  my /= points.size();
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw ConfigError("dof_slope: degenerate SNR range");
  return sxy / sxx;
}

// ---------------------------------------------------------------------------
// Serialization

inline Json scenario_config_to_json(const ScenarioConfig& s) {
  return Json{{"n_links", s.n_links},
              {"n_tx", s.n_tx_antennas},
              {"n_rx", s.n_rx_antennas},
              {"power", s.power},
              {"noise_powers", s.noise_powers},
              {"direct_gains", s.direct_gains},
              {"sir_targets", s.sir_targets},
              {"seed", s.rng_seed},
              {"stopping", Json{{"tolerance", s.settings.tolerance},
                                {"max_iters", s.settings.max_iters}}}};
}

inline ScenarioConfig scenario_config_from_json(const Json& j) {
  ScenarioConfig s;
  try {
    s.n_links = j.at("n_links").get<int>();
    s.n_tx_antennas = j.at("n_tx").get<int>();
    s.n_rx_antennas = j.at("n_rx").get<int>();
    s.power = j.value("power", 1.0);
    s.noise_powers = j.at("noise_powers").get<std::vector<double>>();
    s.direct_gains = j.at("direct_gains").get<std::vector<double>>();
    s.sir_targets = j.at("sir_targets").get<std::vector<double>>();
    s.rng_seed = j.value("seed", std::uint64_t{0});
    if (j.contains("stopping")) {
      s.settings.tolerance = j["stopping"].value("tolerance", 1e-6);
      s.settings.max_iters = j["stopping"].value("max_iters", 500);
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("scenario config: ") + e.what());
  }
  s.validate();
  return s;
}

inline Json experiment_config_to_json(const ExperimentConfig& c) {
  Json algorithms = Json::array();
  for (Algorithm a : c.algorithms) algorithms.push_back(algorithm_name(a));
  Json j{{"name", c.name},
         {"scenario", Json{{"n_links", c.n_links},
                           {"n_tx", c.n_tx},
                           {"n_rx", c.n_rx},
                           {"power", c.power},
                           {"snr_offsets_db", c.snr_offsets_db},
                           {"sir_linear", c.sir_linear}}},
         {"sweep", Json{{"snr_db", c.snr_sweep_db}}},
         {"algorithms", algorithms},
         {"trials", c.n_trials},
         {"seed", c.base_seed},
         {"init", init_mode_name(c.init_mode)},
         {"stopping", Json{{"tolerance", c.settings.tolerance},
                           {"max_iters", c.settings.max_iters}}},
         {"workers", c.n_workers},
         {"output", Json{{"path", c.output_path}, {"format", c.output_format}}}};
  if (c.slope_lo_db && c.slope_hi_db) {
    j["slope"] = Json{{"lo_db", *c.slope_lo_db}, {"hi_db", *c.slope_hi_db}};
  }
  return j;
}

inline ExperimentConfig experiment_config_from_json(const Json& j) {
  ExperimentConfig c;
  try {
    c.name = j.value("name", "");
    const Json& s = j.at("scenario");
    c.n_links = s.at("n_links").get<int>();
    c.n_tx = s.at("n_tx").get<int>();
    c.n_rx = s.at("n_rx").get<int>();
    c.power = s.value("power", 1.0);
    if (s.contains("snr_offsets_db")) {
      c.snr_offsets_db = s["snr_offsets_db"].get<std::vector<double>>();
    } else {
      c.snr_offsets_db.assign(static_cast<std::size_t>(std::max(c.n_links, 0)), 0.0);
    }
    if (s.contains("sir_linear")) {
      c.sir_linear = s["sir_linear"].get<std::vector<double>>();
    } else if (s.contains("sir_db")) {
      c.sir_linear.assign(static_cast<std::size_t>(std::max(c.n_links, 0)),
                          db_to_linear(s["sir_db"].get<double>()));
    } else {
      throw ConfigError("scenario requires sir_db or sir_linear");
    }
    c.snr_sweep_db = j.at("sweep").at("snr_db").get<std::vector<double>>();
    for (const auto& name : j.at("algorithms")) {
      const auto alg = parse_algorithm(name.get<std::string>());
      if (!alg) throw ConfigError("unknown algorithm: " + name.get<std::string>());
      c.algorithms.push_back(*alg);
    }
    c.n_trials = j.value("trials", 50);
    c.base_seed = j.value("seed", std::uint64_t{1});
    c.init_mode = parse_init_mode(j.value("init", "random-uniform-sphere"));
    if (j.contains("stopping")) {
      c.settings.tolerance = j["stopping"].value("tolerance", 1e-6);
      c.settings.max_iters = j["stopping"].value("max_iters", 500);
    }
    c.n_workers = j.value("workers", 1);
    if (j.contains("output")) {
      c.output_path = j["output"].value("path", "");
      c.output_format = j["output"].value("format", "csv");
    }
    if (j.contains("slope")) {
      c.slope_lo_db = j["slope"].at("lo_db").get<double>();
      c.slope_hi_db = j["slope"].at("hi_db").get<double>();
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return experiment_config_from_json(j);
}

inline constexpr const char* kSweepCsvHeader =
    "snr_db,algorithm,mean_sum_rate,stderr,mean_iters,conv_frac,mean_leakage";

inline std::string to_csv(const SweepResult& sweep) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const auto& c : sweep.cells) {
    out += format_double(c.snr_db);
    out += ',';
    out += algorithm_name(c.algorithm);
    out += ',';
    out += format_double(c.mean_sum_rate);
    out += ',';
    out += format_double(c.stderr_sum_rate);
    out += ',';
    out += format_double(c.mean_iterations);
    out += ',';
    out += format_double(c.convergence_fraction);
    out += ',';
    out += format_double(c.mean_leakage);
    out += '\n';
  }
  return out;
}

inline Json to_json(const SweepResult& sweep) {
  Json results = Json::object();
  for (const auto& c : sweep.cells) {
    results[format_double(c.snr_db)][algorithm_name(c.algorithm)] =
        Json{{"mean_sum_rate", c.mean_sum_rate},
             {"stderr", c.stderr_sum_rate},
             {"mean_iters", c.mean_iterations},
             {"conv_frac", c.convergence_fraction},
             {"mean_leakage", c.mean_leakage},
             {"trials", c.n_trials}};
  }
  return Json{{"config", experiment_config_to_json(sweep.config)}, {"results", results}};
}

/// Writes the sweep in the requested format; CSV is the bit-stable
/// plot-ready surface, JSON adds the full config echo for exact replay.
inline void export_results(const SweepResult& sweep, const std::string& format,
                           const std::string& path) {
  if (format != "csv" && format != "json") {
    throw ConfigError("export_results: format must be csv or json");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("export_results: cannot open " + path);
  if (format == "csv") {
    out << to_csv(sweep);
  } else {
    out << to_json(sweep).dump(2) << '\n';
  }
  out.flush();
  if (!out.good()) throw std::runtime_error("export_results: write failed for " + path);
}

/// Minimal CSV reader for round-trip tests and golden comparison:
/// rows of cells, no quoting (the schema never needs it).
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(start));
        break;
      }
      cells.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace icbeam
