// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "icbeam/numerics.hpp"

namespace icbeam {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

/// Iteration budget and convergence tolerance shared by all iterative
/// algorithms of one run (every algorithm in a comparison gets the same).
struct AlgorithmSettings {
  int max_iters = 500;
  double tolerance = 1e-6;  // chordal-displacement threshold
};

/// Static description of one network layout. All powers/gains are linear;
/// dB appears only at construction interfaces.
struct ScenarioConfig {
  int n_links = 0;  // coordinated Tx/Rx pairs
  int n_tx_antennas = 0;
  int n_rx_antennas = 0;
  double power = 1.0;  // per-link transmit power P
  std::vector<double> noise_powers;  // sigma_i^2 per link
  std::vector<double> direct_gains;  // alpha_ii per link
  std::vector<double> sir_targets;   // alpha_ii / sum_{j!=i} alpha_ij, linear
  std::uint64_t rng_seed = 0;
  AlgorithmSettings settings;

  void validate() const {
    if (n_links < 1 || n_tx_antennas < 1 || n_rx_antennas < 1) {
      throw ConfigError("ScenarioConfig: all counts must be >= 1");
    }
    if (!(power > 0.0)) throw ConfigError("ScenarioConfig: power must be > 0");
    auto check = [&](const std::vector<double>& v, const std::string& name) {
      if (static_cast<int>(v.size()) != n_links) {
        throw ConfigError("ScenarioConfig: " + name + " must have n_links entries");
      }
      for (double x : v) {
        if (!(x > 0.0) || !std::isfinite(x)) {
          throw ConfigError("ScenarioConfig: " + name + " entries must be positive finite");
        }
      }
    };
    check(noise_powers, "noise_powers");
    check(direct_gains, "direct_gains");
    check(sir_targets, "sir_targets");
    if (settings.max_iters < 1 || !(settings.tolerance > 0.0)) {
      throw ConfigError("ScenarioConfig: settings require max_iters >= 1 and tolerance > 0");
    }
  }
};

/// One network realization: fast-fading channel matrices H_ji (from Tx i to
/// Rx j) together with the slow parameters they were drawn under.
/// Immutable after construction.
struct ChannelSet {
  int n_links = 0;
  int n_tx = 0;
  int n_rx = 0;
  double power = 1.0;
  RMatrix gains;          // gains(j, i) = alpha_ji
  RVector noise_powers;   // sigma_i^2
  std::vector<CMatrix> channels;  // row-major: channels[j * n_links + i] = H_ji

  /// H_ji: channel from Tx `tx` to Rx `rx`, size n_rx x n_tx.
  const CMatrix& channel(int rx, int tx) const {
    return channels[static_cast<std::size_t>(rx) * n_links + tx];
  }
  CMatrix& channel(int rx, int tx) {
    return channels[static_cast<std::size_t>(rx) * n_links + tx];
  }
};

/// Cross-gain layout: the scenario pins only the aggregate SIR_i, so the
/// interference gain into Rx i is split equally over the N_c - 1 sources:
/// alpha_ij = alpha_ii / (SIR_i * (N_c - 1)) for j != i.
inline RMatrix cross_gain_matrix(const ScenarioConfig& config) {
  const int n = config.n_links;
  RMatrix gains(n, n);
  for (int i = 0; i < n; ++i) {
    const double direct = config.direct_gains[i];
    const double cross = n > 1 ? direct / (config.sir_targets[i] * (n - 1)) : 0.0;
    for (int j = 0; j < n; ++j) {
      gains(i, j) = (i == j) ? direct : cross;
    }
  }
  return gains;
}

/// Draws one fading realization: H_ji = sqrt(alpha_ji) * Hbar_ji with
/// Hbar entries i.i.d. CN(0,1). Sampling order is fixed (rx-major over the
/// link grid, row-major within a matrix), so a seed pins the whole set.
inline ChannelSet realize_channels(const ScenarioConfig& config, Rng& rng) {
  config.validate();
  ChannelSet cs;
  cs.n_links = config.n_links;
  cs.n_tx = config.n_tx_antennas;
  cs.n_rx = config.n_rx_antennas;
  cs.power = config.power;
  cs.gains = cross_gain_matrix(config);
  cs.noise_powers = Eigen::Map<const RVector>(config.noise_powers.data(), config.n_links);
  cs.channels.reserve(static_cast<std::size_t>(cs.n_links) * cs.n_links);
  for (int rx = 0; rx < cs.n_links; ++rx) {
    for (int tx = 0; tx < cs.n_links; ++tx) {
      const double amp = std::sqrt(cs.gains(rx, tx));
      cs.channels.push_back(amp * sample_complex_gaussian(cs.n_rx, cs.n_tx, rng));
    }
  }
  return cs;
}

/// Uniform layout: unit direct gains, one SNR and one SIR for every link.
/// P = 1 by convention; the SNR is realized through the noise power.
inline ScenarioConfig make_symmetric_scenario(int n_links, int n_tx, int n_rx,
                                              double snr_db, double sir_db) {
  ScenarioConfig config;
  config.n_links = n_links;
  config.n_tx_antennas = n_tx;
  config.n_rx_antennas = n_rx;
  config.power = 1.0;
  config.noise_powers.assign(static_cast<std::size_t>(std::max(n_links, 0)),
                             1.0 / db_to_linear(snr_db));
  config.direct_gains.assign(static_cast<std::size_t>(std::max(n_links, 0)), 1.0);
  config.sir_targets.assign(static_cast<std::size_t>(std::max(n_links, 0)),
                            db_to_linear(sir_db));
  config.validate();
  return config;
}

/// Per-link layout: SNR in dB per link, SIR as a linear ratio per link
/// (asymmetric setups quote SIRs like [10, 10, 0.1] directly).
inline ScenarioConfig make_asymmetric_scenario(int n_links, int n_tx, int n_rx,
                                               const std::vector<double>& snr_db_per_link,
                                               const std::vector<double>& sir_linear_per_link) {
  if (static_cast<int>(snr_db_per_link.size()) != n_links ||
      static_cast<int>(sir_linear_per_link.size()) != n_links) {
    throw ConfigError("make_asymmetric_scenario: per-link vectors must have n_links entries");
  }
  ScenarioConfig config;
  config.n_links = n_links;
  config.n_tx_antennas = n_tx;
  config.n_rx_antennas = n_rx;
  config.power = 1.0;
  config.direct_gains.assign(static_cast<std::size_t>(n_links), 1.0);
  config.noise_powers.resize(static_cast<std::size_t>(n_links));
  for (int i = 0; i < n_links; ++i) {
    config.noise_powers[i] = 1.0 / db_to_linear(snr_db_per_link[i]);
  }
  config.sir_targets = sir_linear_per_link;
  config.validate();
  return config;
}

/// Average SNR of link i: gamma_i = P * alpha_ii / sigma_i^2. A slow
/// statistic, independent of the fading realization.
inline double average_link_snr(const ChannelSet& cs, int link) {
  if (link < 0 || link >= cs.n_links) {
    throw std::out_of_range("average_link_snr: link index out of range");
  }
  return cs.power * cs.gains(link, link) / cs.noise_powers[link];
}

}  // namespace icbeam
