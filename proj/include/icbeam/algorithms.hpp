// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icbeam/metrics.hpp"
#include "icbeam/strategies.hpp"

namespace icbeam {

/// One convergence-trace entry, appended after each full iteration.
struct IterationRecord {
  int iteration = 0;              // 1-based
  double sum_rate = 0.0;          // bits/s/Hz
  double total_leakage = 0.0;     // linear power
  double max_displacement = 0.0;  // max chordal move over all beamformers
};

using IterationTrace = std::vector<IterationRecord>;

struct AlgorithmResult {
  BeamformerProfile profile;
  IterationTrace trace;
  bool converged = false;
  int iterations_used = 0;
};

enum class StopDecision { Continue, Converged, BudgetExhausted };

/// Stop once the largest chordal displacement of the last iteration is at
/// or below tolerance, or the iteration budget is spent.
inline StopDecision stopping_check(const IterationTrace& trace, double tolerance,
                                   int max_iters) {
  if (trace.empty()) {
    throw InvalidInputError("stopping_check: empty trace");
  }
  if (trace.back().max_displacement <= tolerance) return StopDecision::Converged;
  if (static_cast<int>(trace.size()) >= max_iters) return StopDecision::BudgetExhausted;
  return StopDecision::Continue;
}

enum class InitMode { RandomUniformSphere, MatchedFilter };

inline InitMode parse_init_mode(std::string_view name) {
  if (name == "random-uniform-sphere") return InitMode::RandomUniformSphere;
  if (name == "matched-filter") return InitMode::MatchedFilter;
  throw ConfigError("unknown init mode: " + std::string(name));
}

inline std::string init_mode_name(InitMode mode) {
  return mode == InitMode::RandomUniformSphere ? "random-uniform-sphere" : "matched-filter";
}

/// Common starting profile handed to every algorithm of a comparison run.
/// random-uniform-sphere: isotropic unit vectors (per link: w then v).
/// matched-filter: dominant right/left singular pair of H_ii.
inline BeamformerProfile initialize_profile(const ChannelSet& cs, InitMode mode, Rng& rng) {
  BeamformerProfile profile;
  profile.tx_beams.reserve(cs.n_links);
  profile.rx_beams.reserve(cs.n_links);
  for (int i = 0; i < cs.n_links; ++i) {
    if (mode == InitMode::RandomUniformSphere) {
      CVector w = sample_complex_gaussian(cs.n_tx, 1, rng);
      CVector v = sample_complex_gaussian(cs.n_rx, 1, rng);
      profile.tx_beams.push_back(w / w.norm());
      profile.rx_beams.push_back(v / v.norm());
    } else {
      const CMatrix& h = cs.channel(i, i);
      if (!(h.norm() > 0.0)) {
        throw DegenerateInputError("initialize_profile: zero direct channel");
      }
      const CVector w = dominant_eigenvector(h.adjoint() * h);
      CVector v = h * w;
      profile.tx_beams.push_back(w);
      profile.rx_beams.push_back(v / v.norm());
    }
  }
  return profile;
}

namespace detail {

inline double profile_displacement(const BeamformerProfile& before,
                                   const BeamformerProfile& after) {
  double d = 0.0;
  for (int i = 0; i < before.n_links(); ++i) {
    d = std::max(d, chordal_distance(before.tx_beams[i], after.tx_beams[i]));
    d = std::max(d, chordal_distance(before.rx_beams[i], after.rx_beams[i]));
  }
  return d;
}

/// Shared iteration shell. `sweep(prev, next)` performs one full Jacobi
/// iteration: every updated beamformer is computed from `prev` (or from
/// beams the sweep itself wrote to `next` earlier in the same iteration,
/// for the tx-then-rx schedules); link order never matters.
template <typename SweepFn>
AlgorithmResult run_iterative(const ChannelSet& cs, const BeamformerProfile& init,
                              const AlgorithmSettings& settings, SweepFn&& sweep) {
  init.validate();
  if (init.n_links() != cs.n_links) {
    throw DimensionError("run_iterative: profile/channel link count mismatch");
  }
  if (settings.max_iters < 1 || !(settings.tolerance > 0.0)) {
    throw ConfigError("run_iterative: max_iters >= 1 and tolerance > 0 required");
  }
  AlgorithmResult result;
  result.profile = init;
  result.trace.reserve(static_cast<std::size_t>(settings.max_iters));
  for (int iter = 1; iter <= settings.max_iters; ++iter) {
    const BeamformerProfile prev = result.profile;
    BeamformerProfile next = prev;
    sweep(prev, next);
    result.profile = std::move(next);
    result.trace.push_back({iter, sum_rate(cs, result.profile),
                            total_leakage(cs, result.profile),
                            profile_displacement(prev, result.profile)});
    const StopDecision decision =
        stopping_check(result.trace, settings.tolerance, settings.max_iters);
    if (decision != StopDecision::Continue) {
      result.converged = decision == StopDecision::Converged;
      break;
    }
  }
  result.iterations_used = static_cast<int>(result.trace.size());
  return result;
}

}  // namespace detail

/// Balanced transmit update of link i under weight matrix lambda, reading
/// only Tx i's own channels {H_ji}_j and the fed-back receive beams.
inline CVector balanced_tx_update(const ChannelSet& cs, const BeamformerProfile& profile,
                                  int link, const RMatrix& lambda) {
  return balanced_response(cs, profile, link, lambda).vector;
}

/// Statistically weighted egoism/altruism balancing with receiver feedback.
/// The weights depend only on slow statistics and are fixed for the whole
/// run; each iteration updates all transmitters from the previous profile,
/// then all max-SINR receivers from the new transmitters.
inline AlgorithmResult run_dba_rf(const ChannelSet& cs, const BeamformerProfile& init,
                                  const AlgorithmSettings& settings) {
  const RMatrix lambda = dba_weights(cs);
  return detail::run_iterative(
      cs, init, settings,
      [&](const BeamformerProfile& prev, BeamformerProfile& next) {
        for (int i = 0; i < cs.n_links; ++i) {
          next.tx_beams[i] = balanced_tx_update(cs, prev, i, lambda);
        }
        for (int i = 0; i < cs.n_links; ++i) {
          next.rx_beams[i] = max_sinr_receiver(cs, next, i);
        }
      });
}

namespace detail {

// Noise-continuation ladder for the pricing iteration. Above this average
// SNR the landscape grows "sacrificed link" traps with very slow escape;
// the iteration first converges at a moderated effective noise and tracks
// the balanced solution as the noise anneals to its true value.
inline constexpr double kPricingSnrCap = 100.0;     // effective start, ~20 dB
inline constexpr double kPricingLadderStep = 3.1622776601683795;  // half decade
inline constexpr int kPricingWarmBudget = 200;      // per warm stage
inline constexpr double kPricingWarmTolMult = 10.0;

// One pricing stage on work_cs (possibly scaled noise); trace metrics are
// always evaluated against the true channel set.
inline bool sr_max_stage(const ChannelSet& true_cs, const ChannelSet& work_cs,
                         BeamformerProfile& profile, IterationTrace& trace, int budget,
                         double tolerance) {
  for (int k = 0; k < budget; ++k) {
    const BeamformerProfile prev = profile;
    const RMatrix lambda = optimal_pricing_weights(work_cs, prev);
    for (int i = 0; i < work_cs.n_links; ++i) {
      profile.tx_beams[i] = balanced_response(work_cs, prev, i, lambda).vector;
    }
    for (int i = 0; i < work_cs.n_links; ++i) {
      profile.rx_beams[i] = max_sinr_receiver(work_cs, profile, i);
    }
    trace.push_back({static_cast<int>(trace.size()) + 1, sum_rate(true_cs, profile),
                     total_leakage(true_cs, profile), profile_displacement(prev, profile)});
    if (trace.back().max_displacement <= tolerance) return true;
  }
  return false;
}

}  // namespace detail

/// Centralized sum-rate maximization: the balancing weights are recomputed
/// every iteration from the full profile (instantaneous pricing), then the
/// same balanced-eigenvector transmit update and max-SINR receivers apply.
/// At high SNR the run anneals from a moderated effective noise level down
/// to the true one (fixed points of the final stage are exactly the
/// stationary points of the true problem); at average SNR <= 100 the
/// ladder is empty and the plain iteration runs.
inline AlgorithmResult run_sr_max(const ChannelSet& cs, const BeamformerProfile& init,
                                  const AlgorithmSettings& settings) {
  init.validate();
  if (init.n_links() != cs.n_links) {
    throw DimensionError("run_sr_max: profile/channel link count mismatch");
  }
  if (settings.max_iters < 1 || !(settings.tolerance > 0.0)) {
    throw ConfigError("run_sr_max: max_iters >= 1 and tolerance > 0 required");
  }
  double snr_max = 0.0;
  for (int i = 0; i < cs.n_links; ++i) snr_max = std::max(snr_max, average_link_snr(cs, i));
  std::vector<double> noise_scales;  // descending: first stage has the lowest effective SNR
  for (double s = snr_max / detail::kPricingSnrCap; s > 1.0 + 1e-9;
       s /= detail::kPricingLadderStep) {
    noise_scales.push_back(s);
  }

  AlgorithmResult result;
  result.profile = init;
  if (!noise_scales.empty()) {
    const int per_stage =
        std::min(detail::kPricingWarmBudget,
                 std::max(1, settings.max_iters / (2 * static_cast<int>(noise_scales.size()))));
    for (double scale : noise_scales) {
      ChannelSet warm = cs;
      warm.noise_powers *= scale;
      detail::sr_max_stage(cs, warm, result.profile, result.trace, per_stage,
                           settings.tolerance * detail::kPricingWarmTolMult);
    }
  }
  const int remaining =
      std::max(1, settings.max_iters - static_cast<int>(result.trace.size()));
  result.converged =
      detail::sr_max_stage(cs, cs, result.profile, result.trace, remaining, settings.tolerance);
  result.iterations_used = static_cast<int>(result.trace.size());
  return result;
}

/// Reverse-network max-SINR transmit update: Tx i acts as the receiver of
/// a reciprocal network with channels H^H, reverse transmit beams v_j,
/// the forward per-link power, and noise sigma_i^2.
inline CVector reverse_max_sinr_update(const ChannelSet& cs, const BeamformerProfile& profile,
                                       int link) {
  const CVector signal = cs.channel(link, link).adjoint() * profile.rx_beams[link];
  if (!(signal.norm() > 0.0)) {
    throw DegenerateInputError("reverse_max_sinr_update: H_ii^H v_i is zero");
  }
  CMatrix c = cs.noise_powers[link] * CMatrix::Identity(cs.n_tx, cs.n_tx);
  for (int j = 0; j < cs.n_links; ++j) {
    if (j == link) continue;
    const CVector received = cs.channel(j, link).adjoint() * profile.rx_beams[j];
    c.noalias() += cs.power * (received * received.adjoint());
  }
  const CVector w = c.llt().solve(signal);
  return w / w.norm();
}

/// SINR-maximizing iteration on both sides: max-SINR receivers in the
/// forward network, then max-SINR "receivers" of the reciprocal network as
/// transmit updates. Interference suppression is a byproduct, not a goal.
inline AlgorithmResult run_max_sinr(const ChannelSet& cs, const BeamformerProfile& init,
                                    const AlgorithmSettings& settings) {
  return detail::run_iterative(
      cs, init, settings,
      [&](const BeamformerProfile& prev, BeamformerProfile& next) {
        for (int i = 0; i < cs.n_links; ++i) {
          next.rx_beams[i] = max_sinr_receiver(cs, prev, i);
        }
        for (int i = 0; i < cs.n_links; ++i) {
          next.tx_beams[i] = reverse_max_sinr_update(cs, next, i);
        }
      });
}

/// Downlink interference covariance seen by Rx i (unscaled by P):
/// Q_i = sum_{k != i} H_ik w_k w_k^H H_ik^H.
inline CMatrix downlink_interference(const ChannelSet& cs, const BeamformerProfile& profile,
                                     int link) {
  CMatrix q = CMatrix::Zero(cs.n_rx, cs.n_rx);
  for (int k = 0; k < cs.n_links; ++k) {
    if (k == link) continue;
    const CVector g = cs.channel(link, k) * profile.tx_beams[k];
    q.noalias() += g * g.adjoint();
  }
  return q;
}

/// Uplink (reciprocal) interference covariance at Tx i:
/// Q_i = sum_{k != i} H_ki^H v_k v_k^H H_ki.
inline CMatrix uplink_interference(const ChannelSet& cs, const BeamformerProfile& profile,
                                   int link) {
  CMatrix q = CMatrix::Zero(cs.n_tx, cs.n_tx);
  for (int k = 0; k < cs.n_links; ++k) {
    if (k == link) continue;
    const CVector g = cs.channel(k, link).adjoint() * profile.rx_beams[k];
    q.noalias() += g * g.adjoint();
  }
  return q;
}

namespace detail {
// Leakage-minimizing half-update. A zero covariance (no cross channels)
// makes every beam optimal; the current one is kept so an aligned profile
// stays fixed instead of snapping to a basis vector.
inline CVector least_leakage_beam(const CMatrix& q, const CVector& current) {
  if (q.norm() == 0.0) return current;
  return least_eigenvector(q);
}
}  // namespace detail

/// One alternating-minimization receive half-step (all links, Jacobi).
inline std::vector<CVector> alt_min_rx_step(const ChannelSet& cs,
                                            const BeamformerProfile& profile) {
  std::vector<CVector> beams(static_cast<std::size_t>(cs.n_links));
  for (int i = 0; i < cs.n_links; ++i) {
    beams[i] = detail::least_leakage_beam(downlink_interference(cs, profile, i),
                                          profile.rx_beams[i]);
  }
  return beams;
}

/// One alternating-minimization transmit half-step (all links, Jacobi).
inline std::vector<CVector> alt_min_tx_step(const ChannelSet& cs,
                                            const BeamformerProfile& profile) {
  std::vector<CVector> beams(static_cast<std::size_t>(cs.n_links));
  for (int i = 0; i < cs.n_links; ++i) {
    beams[i] = detail::least_leakage_beam(uplink_interference(cs, profile, i),
                                          profile.tx_beams[i]);
  }
  return beams;
}

/// Interference-alignment by alternating leakage minimization: receivers
/// take the least eigenvector of the downlink interference covariance,
/// transmitters of the uplink one. Total leakage is non-increasing at
/// every half-step.
inline AlgorithmResult run_alt_min(const ChannelSet& cs, const BeamformerProfile& init,
                                   const AlgorithmSettings& settings) {
  return detail::run_iterative(
      cs, init, settings,
      [&](const BeamformerProfile& prev, BeamformerProfile& next) {
        next.rx_beams = alt_min_rx_step(cs, prev);
        next.tx_beams = alt_min_tx_step(cs, next);
      });
}

/// Pure egoistic play: every transmitter best-responds to its own SINR
/// only (weights identically zero), receivers stay max-SINR.
inline AlgorithmResult run_egoistic(const ChannelSet& cs, const BeamformerProfile& init,
                                    const AlgorithmSettings& settings) {
  return detail::run_iterative(
      cs, init, settings,
      [&](const BeamformerProfile& prev, BeamformerProfile& next) {
        for (int i = 0; i < cs.n_links; ++i) {
          next.tx_beams[i] = egoistic_response(cs, prev, i);
        }
        for (int i = 0; i < cs.n_links; ++i) {
          next.rx_beams[i] = max_sinr_receiver(cs, next, i);
        }
      });
}

/// Pure altruistic play: every transmitter minimizes the interference it
/// causes, receivers stay max-SINR.
inline AlgorithmResult run_altruistic(const ChannelSet& cs, const BeamformerProfile& init,
                                      const AlgorithmSettings& settings) {
  return detail::run_iterative(
      cs, init, settings,
      [&](const BeamformerProfile& prev, BeamformerProfile& next) {
        for (int i = 0; i < cs.n_links; ++i) {
          next.tx_beams[i] = altruistic_response(cs, prev, i);
        }
        for (int i = 0; i < cs.n_links; ++i) {
          next.rx_beams[i] = max_sinr_receiver(cs, next, i);
        }
      });
}

enum class Algorithm { DbaRf, SrMax, MaxSinr, AltMin, Egoistic, Altruistic };

inline std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::DbaRf: return "dba-rf";
    case Algorithm::SrMax: return "sr-max";
    case Algorithm::MaxSinr: return "max-sinr";
    case Algorithm::AltMin: return "alt-min";
    case Algorithm::Egoistic: return "egoistic";
    case Algorithm::Altruistic: return "altruistic";
  }
  return "unknown";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::DbaRf, Algorithm::SrMax, Algorithm::MaxSinr,
                      Algorithm::AltMin, Algorithm::Egoistic, Algorithm::Altruistic}) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

inline AlgorithmResult run_algorithm(Algorithm a, const ChannelSet& cs,
                                     const BeamformerProfile& init,
                                     const AlgorithmSettings& settings) {
  switch (a) {
    case Algorithm::DbaRf: return run_dba_rf(cs, init, settings);
    case Algorithm::SrMax: return run_sr_max(cs, init, settings);
    case Algorithm::MaxSinr: return run_max_sinr(cs, init, settings);
    case Algorithm::AltMin: return run_alt_min(cs, init, settings);
    case Algorithm::Egoistic: return run_egoistic(cs, init, settings);
    case Algorithm::Altruistic: return run_altruistic(cs, init, settings);
  }
  throw ConfigError("run_algorithm: unknown algorithm");
}

}  // namespace icbeam
