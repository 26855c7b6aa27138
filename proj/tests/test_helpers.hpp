// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "icbeam/icbeam.hpp"

namespace icbeam::test {

inline CMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  const CMatrix g = sample_complex_gaussian(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

inline CVector random_unit_vector(Eigen::Index n, Rng& rng) {
  const CVector v = sample_complex_gaussian(n, 1, rng);
  return v / v.norm();
}

inline BeamformerProfile random_profile(const ChannelSet& cs, Rng& rng) {
  BeamformerProfile p;
  for (int i = 0; i < cs.n_links; ++i) {
    p.tx_beams.push_back(random_unit_vector(cs.n_tx, rng));
    p.rx_beams.push_back(random_unit_vector(cs.n_rx, rng));
  }
  return p;
}

/// Standard small test instance: symmetric [3,2,2], 20 dB SNR, 10 dB SIR.
inline ChannelSet standard_322(std::uint64_t seed) {
  const ScenarioConfig config = make_symmetric_scenario(3, 2, 2, 20.0, 10.0);
  Rng rng(seed);
  return realize_channels(config, rng);
}

}  // namespace icbeam::test
