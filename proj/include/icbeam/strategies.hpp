// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "icbeam/network.hpp"
#include "icbeam/numerics.hpp"

namespace icbeam {

/// Transmit vectors w_i (length N_t) and receive vectors v_i (length N_r)
/// of every link at one iteration. Beamformers carry unit norm: the power
/// constraint |w|^2 <= 1 is held with equality (per-link SINR is monotone
/// in own transmit power, so the boundary is never suboptimal).
struct BeamformerProfile {
  std::vector<CVector> tx_beams;
  std::vector<CVector> rx_beams;

  int n_links() const { return static_cast<int>(tx_beams.size()); }

  void validate() const {
    if (tx_beams.size() != rx_beams.size()) {
      throw DimensionError("BeamformerProfile: tx/rx count mismatch");
    }
    constexpr double kNormTol = 1e-10;
    for (const auto& w : tx_beams) {
      if (std::abs(w.norm() - 1.0) > kNormTol) {
        throw InvalidInputError("BeamformerProfile: tx beam not unit norm");
      }
    }
    for (const auto& v : rx_beams) {
      if (std::abs(v.norm() - 1.0) > kNormTol) {
        throw InvalidInputError("BeamformerProfile: rx beam not unit norm");
      }
    }
  }
};

/// Covariance of interference plus noise at Rx i:
/// C_Ri = P * sum_{j != i} H_ij w_j w_j^H H_ij^H + sigma_i^2 I.
/// Positive definite whenever sigma_i^2 > 0.
inline CMatrix interference_covariance(const ChannelSet& cs, const BeamformerProfile& profile,
                                       int link) {
  CMatrix c = cs.noise_powers[link] * CMatrix::Identity(cs.n_rx, cs.n_rx);
  for (int j = 0; j < cs.n_links; ++j) {
    if (j == link) continue;
    const CVector received = cs.channel(link, j) * profile.tx_beams[j];
    c.noalias() += cs.power * (received * received.adjoint());
  }
  return c;
}

/// Max-SINR receiver: v_i = C_Ri^{-1} H_ii w_i, normalized. Optimal over
/// all unit receive vectors for fixed transmitters.
inline CVector max_sinr_receiver(const ChannelSet& cs, const BeamformerProfile& profile,
                                 int link) {
  const CVector signal = cs.channel(link, link) * profile.tx_beams[link];
  if (!(signal.norm() > 0.0)) {
    throw DegenerateInputError("max_sinr_receiver: H_ii w_i is zero");
  }
  const CMatrix c = interference_covariance(cs, profile, link);
  const CVector unnormalized = c.llt().solve(signal);
  return unnormalized / unnormalized.norm();
}

/// Post-combining SINR of link i:
/// gamma_i = |v_i^H H_ii w_i|^2 P / (sum_{j != i} |v_i^H H_ij w_j|^2 P + sigma_i^2).
inline double sinr(const ChannelSet& cs, const BeamformerProfile& profile, int link) {
  const CVector& v = profile.rx_beams[link];
  const double signal =
      cs.power * std::norm(v.dot(cs.channel(link, link) * profile.tx_beams[link]));
  double denom = cs.noise_powers[link];
  for (int j = 0; j < cs.n_links; ++j) {
    if (j == link) continue;
    denom += cs.power * std::norm(v.dot(cs.channel(link, j) * profile.tx_beams[j]));
  }
  return signal / denom;
}

/// Egoistic equilibrium matrix E_i = H_ii^H v_i v_i^H H_ii — rank one,
/// Hermitian PSD. Built from Tx i's own channel and its fed-back receiver,
/// nothing else.
inline CMatrix egoistic_matrix(const CMatrix& h_direct, const CVector& v) {
  const CVector g = h_direct.adjoint() * v;  // H^H v
  return g * g.adjoint();
}

inline CMatrix egoistic_matrix(const ChannelSet& cs, const BeamformerProfile& profile,
                               int link) {
  return egoistic_matrix(cs.channel(link, link), profile.rx_beams[link]);
}

/// Egoistic best response: dominant eigenvector of E_i (equivalently the
/// normalized direction H_ii^H v_i).
inline CVector egoistic_response(const ChannelSet& cs, const BeamformerProfile& profile,
                                 int link) {
  const CMatrix e = egoistic_matrix(cs, profile, link);
  if (!(e.norm() > 0.0)) {
    throw DegenerateInputError("egoistic_response: v_i is orthogonal to the range of H_ii");
  }
  return dominant_eigenvector(e);
}

/// Altruistic equilibrium matrix A_ji = H_ji^H v_j v_j^H H_ji: the quadratic
/// form giving the interference Tx i causes at Rx j. Local to Tx i given
/// the fed-back v_j.
inline CMatrix altruistic_matrix(const CMatrix& h_cross, const CVector& v_other) {
  const CVector g = h_cross.adjoint() * v_other;
  return g * g.adjoint();
}

inline CMatrix altruistic_matrix(const ChannelSet& cs, const BeamformerProfile& profile,
                                 int rx_link, int tx_link) {
  return altruistic_matrix(cs.channel(rx_link, tx_link), profile.rx_beams[rx_link]);
}

/// Altruistic best response: least eigenvector of sum_{j != i} A_ji,
/// the direction causing the least total interference. With a single link
/// the sum is the zero matrix and the canonical basis vector e1 is
/// returned (any unit vector is vacuously optimal).
inline CVector altruistic_response(const ChannelSet& cs, const BeamformerProfile& profile,
                                   int link) {
  CMatrix sum = CMatrix::Zero(cs.n_tx, cs.n_tx);
  for (int j = 0; j < cs.n_links; ++j) {
    if (j == link) continue;
    sum += altruistic_matrix(cs, profile, j, link);
  }
  return least_eigenvector(sum);
}

namespace detail {
// Statistical weights are a large-SNR limit; magnitudes are capped so the
// balanced eigenproblem stays finite in extreme sweeps.
inline constexpr double kMaxAbsWeight = 1e12;
}  // namespace detail

/// Statistical egoism/altruism weights:
/// lambda_ji = -((1 + gamma_i^-1) / (1 + gamma_j^-1)) * gamma_j
/// with gamma the average link SNRs. Depends only on slow statistics
/// (P, alpha, sigma^2), never on the fading realization. Entry (j, i)
/// holds lambda_ji; the diagonal is unused and left at zero.
inline RMatrix dba_weights(const ChannelSet& cs) {
  const int n = cs.n_links;
  RVector gamma(n);
  for (int i = 0; i < n; ++i) gamma[i] = average_link_snr(cs, i);
  RMatrix lambda = RMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const double value =
          -((1.0 + 1.0 / gamma[i]) / (1.0 + 1.0 / gamma[j])) * gamma[j];
      lambda(j, i) = std::max(value, -detail::kMaxAbsWeight);
    }
  }
  return lambda;
}

/// Instantaneous sum-rate-optimal pricing weights (full CSI):
/// lambda_ji = -(S_j / T_j) * (T_i / D_j), with
///   S_j = |v_j^H H_jj w_j|^2 P               (own received signal at Rx j)
///   T_j = sum_k |v_j^H H_jk w_k|^2 P + sigma_j^2   (total received at Rx j)
///   D_j = sum_{k != j} |v_j^H H_jk w_k|^2 P + sigma_j^2  (interference+noise)
/// Always <= 0. Entry (j, i) holds lambda_ji.
inline RMatrix optimal_pricing_weights(const ChannelSet& cs, const BeamformerProfile& profile) {
  const int n = cs.n_links;
  RVector signal(n), total(n), interf_noise(n);
  for (int j = 0; j < n; ++j) {
    const CVector& v = profile.rx_beams[j];
    double own = 0.0;
    double others = 0.0;
    for (int k = 0; k < n; ++k) {
      const double p = cs.power * std::norm(v.dot(cs.channel(j, k) * profile.tx_beams[k]));
      if (k == j) {
        own = p;
      } else {
        others += p;
      }
    }
    signal[j] = own;
    interf_noise[j] = others + cs.noise_powers[j];
    total[j] = own + others + cs.noise_powers[j];
  }
  RMatrix lambda = RMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      lambda(j, i) = -(signal[j] / total[j]) * (total[i] / interf_noise[j]);
    }
  }
  return lambda;
}

/// Balanced best response: dominant eigenpair of
///   E_i + sum_j lambda_ji A_ji.
/// The combined matrix is indefinite (the weights are nonpositive);
/// "dominant" means the largest signed eigenvalue, whose value is the
/// Lagrange multiplier of the stationarity condition and is returned
/// alongside the vector.
inline EigenPair balanced_response(const CMatrix& egoistic,
                                   const std::vector<CMatrix>& altruistic,
                                   const std::vector<double>& weights) {
  if (altruistic.size() != weights.size()) {
    throw DimensionError("balanced_response: one weight per altruistic matrix required");
  }
  CMatrix m = egoistic;
  for (std::size_t k = 0; k < altruistic.size(); ++k) {
    if (altruistic[k].rows() != m.rows() || altruistic[k].cols() != m.cols()) {
      throw DimensionError("balanced_response: matrix dimension mismatch");
    }
    m += weights[k] * altruistic[k];
  }
  return dominant_eigenpair(m);
}

/// Balanced response of one link from a full profile and a weight matrix
/// (entry (j, i) weighting A_ji).
inline EigenPair balanced_response(const ChannelSet& cs, const BeamformerProfile& profile,
                                   int link, const RMatrix& lambda) {
  std::vector<CMatrix> alts;
  std::vector<double> weights;
  alts.reserve(cs.n_links - 1);
  weights.reserve(cs.n_links - 1);
  for (int j = 0; j < cs.n_links; ++j) {
    if (j == link) continue;
    alts.push_back(altruistic_matrix(cs, profile, j, link));
    weights.push_back(lambda(j, link));
  }
  return balanced_response(egoistic_matrix(cs, profile, link), alts, weights);
}

/// All equilibrium matrices of one profile: egoistic[i] = E_i and
/// altruistic[j][i] = A_ji (unused diagonal left empty).
struct EquilibriumMatrices {
  std::vector<CMatrix> egoistic;
  std::vector<std::vector<CMatrix>> altruistic;
};

inline EquilibriumMatrices equilibrium_matrices(const ChannelSet& cs,
                                                const BeamformerProfile& profile) {
  EquilibriumMatrices m;
  m.egoistic.reserve(cs.n_links);
  m.altruistic.assign(cs.n_links, std::vector<CMatrix>(cs.n_links));
  for (int i = 0; i < cs.n_links; ++i) {
    m.egoistic.push_back(egoistic_matrix(cs, profile, i));
    for (int j = 0; j < cs.n_links; ++j) {
      if (j == i) continue;
      m.altruistic[j][i] = altruistic_matrix(cs, profile, j, i);
    }
  }
  return m;
}

}  // namespace icbeam
