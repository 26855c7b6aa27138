// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "icbeam/strategies.hpp"

namespace icbeam {

/// Network sum rate in bits/s/Hz: sum_i log2(1 + gamma_i).
inline double sum_rate(const ChannelSet& cs, const BeamformerProfile& profile) {
  double total = 0.0;
  for (int i = 0; i < cs.n_links; ++i) {
    total += std::log2(1.0 + sinr(cs, profile, i));
  }
  return total;
}

/// Total post-combining cross interference power:
/// sum_i sum_{j != i} |v_i^H H_ij w_j|^2 P. Zero exactly when the
/// interference-alignment conditions v_i^H H_ij w_j = 0 all hold.
inline double total_leakage(const ChannelSet& cs, const BeamformerProfile& profile) {
  double total = 0.0;
  for (int i = 0; i < cs.n_links; ++i) {
    const CVector& v = profile.rx_beams[i];
    for (int j = 0; j < cs.n_links; ++j) {
      if (j == i) continue;
      total += cs.power * std::norm(v.dot(cs.channel(i, j) * profile.tx_beams[j]));
    }
  }
  return total;
}

/// Leakage reported both absolute and relative to the total received
/// signal power sum_i |v_i^H H_ii w_i|^2 P.
struct LeakageReport {
  double absolute = 0.0;
  double relative = 0.0;
};

inline LeakageReport ia_residual(const ChannelSet& cs, const BeamformerProfile& profile) {
  LeakageReport report;
  report.absolute = total_leakage(cs, profile);
  double signal = 0.0;
  for (int i = 0; i < cs.n_links; ++i) {
    signal += cs.power *
              std::norm(profile.rx_beams[i].dot(cs.channel(i, i) * profile.tx_beams[i]));
  }
  report.relative = report.absolute == 0.0 ? 0.0 : report.absolute / signal;
  return report;
}

}  // namespace icbeam
