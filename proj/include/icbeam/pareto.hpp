// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "icbeam/numerics.hpp"

namespace icbeam {

/// Two-link MISO instance (single receive antenna per link). Channels are
/// row vectors with the rx-first index convention used everywhere in this
/// library: h_ji runs from Tx i to Rx j, so h12 is the interference
/// channel into Rx 1 and h21 the one out of Tx 1. rho is the common
/// transmit SNR (unit noise power).
struct MisoScenario {
  CVector h11;
  CVector h12;
  CVector h21;
  CVector h22;
  double rho = 1.0;

  void validate() const {
    for (const CVector* h : {&h11, &h12, &h21, &h22}) {
      if (h->size() == 0 || !(h->norm() > 0.0) || !h->allFinite()) {
        throw DegenerateInputError("MisoScenario: channels must be nonzero and finite");
      }
    }
    if (h11.size() != h12.size() || h11.size() != h21.size() || h11.size() != h22.size()) {
      throw DimensionError("MisoScenario: all channels need the same antenna count");
    }
    if (!(rho > 0.0)) {
      throw DomainError("MisoScenario: rho must be positive");
    }
  }
};

/// Scalars of the zeta parametrization. For link 1 the reference direction
/// is the interference channel out of Tx 1 (toward Rx 2):
///   a1 = |Pi h11^H|^2, b1 = |Pi_perp h11^H|^2  (Pi projects onto that channel),
///   c1 = rho * |that channel|^2,
/// and symmetrically for link 2. a_i + b_i = |h_ii|^2 and the egoistic
/// (MRT) corner sits at zeta_max_i = a_i / (a_i + b_i).
struct ZetaCoefficients {
  double a1 = 0.0, b1 = 0.0;
  double a2 = 0.0, b2 = 0.0;
  double c1 = 0.0, c2 = 0.0;
  double zeta_max_1 = 0.0, zeta_max_2 = 0.0;
  double rho = 1.0;
};

/// One boundary point: the parameter pair and the SINRs it achieves.
struct ParetoPoint {
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

/// Closed-form partial derivatives of both SINRs in both parameters.
struct SinrPartials {
  double dg1_dz1 = 0.0;
  double dg1_dz2 = 0.0;
  double dg2_dz1 = 0.0;
  double dg2_dz2 = 0.0;
};

/// Boundary curve plus bookkeeping: zeta1 grid values whose scan found no
/// root, and the degenerate flag for collapsed parametrizations.
struct BoundarySolution {
  std::vector<ParetoPoint> points;
  std::vector<double> skipped_zeta1;
  bool degenerate = false;
  std::string warning;
};

inline ZetaCoefficients zeta_coefficients(const MisoScenario& s) {
  s.validate();
  ZetaCoefficients c;
  // Link 1 projects its direct channel onto the channel it interferes
  // through (Tx 1 -> Rx 2, i.e. h21); link 2 onto h12.
  {
    const CMatrix pi = projector_onto(s.h21);
    const CVector direct = s.h11.conjugate();
    c.a1 = (pi * direct).squaredNorm();
    c.b1 = (direct - pi * direct).squaredNorm();
    c.c1 = s.rho * s.h21.squaredNorm();
  }
  {
    const CMatrix pi = projector_onto(s.h12);
    const CVector direct = s.h22.conjugate();
    c.a2 = (pi * direct).squaredNorm();
    c.b2 = (direct - pi * direct).squaredNorm();
    c.c2 = s.rho * s.h12.squaredNorm();
  }
  c.zeta_max_1 = c.a1 / (c.a1 + c.b1);
  c.zeta_max_2 = c.a2 / (c.a2 + c.b2);
  c.rho = s.rho;
  return c;
}

namespace detail {
// A parametrization direction collapses when the direct channel is
// (numerically) parallel or orthogonal to the cross channel.
inline bool zeta_degenerate(double a, double b) {
  const double scale = a + b;
  return a <= 1e-14 * scale || b <= 1e-14 * scale;
}
}  // namespace detail

/// Transmit beamformer of `link` at parameter zeta:
///   w = sqrt(zeta) * u_a + sqrt(1 - zeta) * u_b,
/// where u_a is the unit projection of the direct channel onto the cross
/// channel direction and u_b its unit complement. zeta is exactly the
/// fraction of power radiated along the cross channel:
///   |h_cross w|^2 = zeta * |h_cross|^2,
///   |h_direct w|^2 = (sqrt(a zeta) + sqrt(b (1 - zeta)))^2.
/// zeta = 0 is zero-forcing; zeta = zeta_max is MRT. If the span collapses
/// (a or b zero) the single feasible unit beamformer is returned.
inline CVector zeta_beamformer(const MisoScenario& s, int link, double zeta) {
  s.validate();
  if (link != 1 && link != 2) {
    throw DomainError("zeta_beamformer: link must be 1 or 2");
  }
  if (!(zeta >= 0.0 && zeta <= 1.0)) {
    throw DomainError("zeta_beamformer: zeta must lie in [0, 1]");
  }
  const CVector& cross = link == 1 ? s.h21 : s.h12;
  const CVector& direct = link == 1 ? s.h11 : s.h22;
  const CMatrix pi = projector_onto(cross);
  const CVector d = direct.conjugate();
  const CVector pa = pi * d;
  const CVector pb = d - pa;
  const double a = pa.squaredNorm();
  const double b = pb.squaredNorm();
  if (detail::zeta_degenerate(a, b)) {
    const CVector& only = a > b ? pa : pb;
    return only / only.norm();
  }
  return std::sqrt(zeta) * (pa / std::sqrt(a)) + std::sqrt(1.0 - zeta) * (pb / std::sqrt(b));
}

/// Closed-form SINR pair at (zeta1, zeta2):
///   gamma1 = rho * (sqrt(a1 z1) + sqrt(b1 (1 - z1)))^2 / (1 + z2 c2)
/// and symmetrically for gamma2; c2 scales the interference caused by
/// Tx 2 into Rx 1.
inline std::pair<double, double> zeta_sinrs(const ZetaCoefficients& c, double zeta1,
                                            double zeta2) {
  if (!(zeta1 >= 0.0 && zeta1 <= 1.0 && zeta2 >= 0.0 && zeta2 <= 1.0)) {
    throw DomainError("zeta_sinrs: zeta values must lie in [0, 1]");
  }
  const double n1 = std::sqrt(c.a1 * zeta1) + std::sqrt(c.b1 * (1.0 - zeta1));
  const double n2 = std::sqrt(c.a2 * zeta2) + std::sqrt(c.b2 * (1.0 - zeta2));
  const double gamma1 = c.rho * n1 * n1 / (1.0 + zeta2 * c.c2);
  const double gamma2 = c.rho * n2 * n2 / (1.0 + zeta1 * c.c1);
  return {gamma1, gamma2};
}

/// All four partial derivatives of the closed-form SINRs. Valid on the
/// open square (0,1)^2; the endpoint square roots are singular.
inline SinrPartials sinr_partials(const ZetaCoefficients& c, double zeta1, double zeta2) {
  if (!(zeta1 > 0.0 && zeta1 < 1.0 && zeta2 > 0.0 && zeta2 < 1.0)) {
    throw DomainError("sinr_partials: zeta values must lie strictly inside (0, 1)");
  }
  const double n1 = std::sqrt(c.a1 * zeta1) + std::sqrt(c.b1 * (1.0 - zeta1));
  const double n2 = std::sqrt(c.a2 * zeta2) + std::sqrt(c.b2 * (1.0 - zeta2));
  const double slope1 =
      std::sqrt(c.a1) / std::sqrt(zeta1) - std::sqrt(c.b1) / std::sqrt(1.0 - zeta1);
  const double slope2 =
      std::sqrt(c.a2) / std::sqrt(zeta2) - std::sqrt(c.b2) / std::sqrt(1.0 - zeta2);
  const double den1 = 1.0 + zeta2 * c.c2;  // interference into Rx 1
  const double den2 = 1.0 + zeta1 * c.c1;  // interference into Rx 2
  SinrPartials p;
  p.dg1_dz1 = c.rho * n1 * slope1 / den1;
  p.dg1_dz2 = -c.rho * c.c2 * n1 * n1 / (den1 * den1);
  p.dg2_dz2 = c.rho * n2 * slope2 / den2;
  p.dg2_dz1 = -c.rho * c.c1 * n2 * n2 / (den2 * den2);
  return p;
}

/// Left/right-hand-side difference of the boundary equation:
///   L(z1) = slope1(z1) (1 + z1 c1) / (c1 N1(z1))
///   R(z2) = c2 N2(z2) / (slope2(z2) (1 + z2 c2))
/// L runs from +inf (z1 -> 0) to 0 (z1 -> zeta_max_1); R from 0 (z2 -> 0)
/// to +inf (z2 -> zeta_max_2). A zero of L - R is a Pareto-stationary
/// pair: the SINR gradients are exactly anti-parallel there.
inline double boundary_balance(const ZetaCoefficients& c, double zeta1, double zeta2) {
  if (!(zeta1 > 0.0 && zeta1 < c.zeta_max_1)) {
    throw DomainError("boundary_balance: zeta1 must lie strictly inside (0, zeta_max_1)");
  }
  if (!(zeta2 > 0.0 && zeta2 < c.zeta_max_2)) {
    throw DomainError("boundary_balance: zeta2 must lie strictly inside (0, zeta_max_2)");
  }
  const double n1 = std::sqrt(c.a1 * zeta1) + std::sqrt(c.b1 * (1.0 - zeta1));
  const double n2 = std::sqrt(c.a2 * zeta2) + std::sqrt(c.b2 * (1.0 - zeta2));
  const double slope1 =
      std::sqrt(c.a1) / std::sqrt(zeta1) - std::sqrt(c.b1) / std::sqrt(1.0 - zeta1);
  const double slope2 =
      std::sqrt(c.a2) / std::sqrt(zeta2) - std::sqrt(c.b2) / std::sqrt(1.0 - zeta2);
  const double lhs = slope1 * (1.0 + zeta1 * c.c1) / (c.c1 * n1);
  const double rhs = c.c2 * n2 / (slope2 * (1.0 + zeta2 * c.c2));
  return lhs - rhs;
}

namespace detail {

inline constexpr int kScanSubintervals = 512;
inline constexpr double kScanInset = 1e-9;       // relative endpoint inset
inline constexpr double kBisectionWidth = 1e-12; // absolute zeta2 bracket width

/// Bisection on a certified sign change of zeta2 -> balance(zeta1, zeta2).
inline double bisect_balance(const ZetaCoefficients& c, double zeta1, double lo, double hi,
                             double f_lo) {
  while (hi - lo > kBisectionWidth) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = boundary_balance(c, zeta1, mid);
    if (f_mid == 0.0) return mid;
    if ((f_lo > 0.0) == (f_mid > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Traces the Pareto boundary on an interior zeta1 grid. For each grid
/// value every sign change of the balance over zeta2 is bracketed
/// (512-subinterval scan, robust to non-monotone sides) and bisected, and
/// each root is certified with the strict trade-off inequalities: along
/// the gamma1-ascent direction (delta1, delta2) = grad gamma1, gamma1
/// strictly gains and gamma2 strictly loses. Collapsed parametrizations
/// yield a degenerate single-point boundary and a warning.
inline BoundarySolution solve_boundary(const MisoScenario& s, int n_points) {
  if (n_points < 2) {
    throw DomainError("solve_boundary: n_points must be >= 2");
  }
  const ZetaCoefficients c = zeta_coefficients(s);
  BoundarySolution solution;

  if (detail::zeta_degenerate(c.a1, c.b1) || detail::zeta_degenerate(c.a2, c.b2)) {
    solution.degenerate = true;
    solution.warning =
        "collapsed zeta interval (direct channel parallel or orthogonal to cross channel); "
        "returning the single feasible operating point";
    const double z1 = detail::zeta_degenerate(c.a1, c.b1) ? (c.a1 > c.b1 ? 1.0 : 0.0)
                                                          : c.zeta_max_1;
    const double z2 = detail::zeta_degenerate(c.a2, c.b2) ? (c.a2 > c.b2 ? 1.0 : 0.0)
                                                          : c.zeta_max_2;
    const auto [g1, g2] = zeta_sinrs(c, z1, z2);
    solution.points.push_back({z1, z2, g1, g2});
    return solution;
  }

  const double lo2 = c.zeta_max_2 * detail::kScanInset;
  const double hi2 = c.zeta_max_2 * (1.0 - detail::kScanInset);
  std::vector<double> balance(detail::kScanSubintervals + 1);

  for (int k = 1; k <= n_points; ++k) {
    const double zeta1 = c.zeta_max_1 * k / (n_points + 1);
    bool found = false;
    for (int m = 0; m <= detail::kScanSubintervals; ++m) {
      const double z2 = lo2 + (hi2 - lo2) * m / detail::kScanSubintervals;
      balance[m] = boundary_balance(c, zeta1, z2);
    }
    for (int m = 0; m < detail::kScanSubintervals; ++m) {
      double root;
      if (balance[m] == 0.0) {
        root = lo2 + (hi2 - lo2) * m / detail::kScanSubintervals;
      } else if ((balance[m] > 0.0) != (balance[m + 1] > 0.0)) {
        const double a = lo2 + (hi2 - lo2) * m / detail::kScanSubintervals;
        const double b = lo2 + (hi2 - lo2) * (m + 1) / detail::kScanSubintervals;
        root = detail::bisect_balance(c, zeta1, a, b, balance[m]);
      } else {
        continue;
      }
      const SinrPartials p = sinr_partials(c, zeta1, root);
      const double d1 = p.dg1_dz1;
      const double d2 = p.dg1_dz2;
      const bool gamma1_gains = d1 * p.dg1_dz1 + d2 * p.dg1_dz2 > 0.0;
      const bool gamma2_loses = d1 * p.dg2_dz1 + d2 * p.dg2_dz2 < 0.0;
      if (!(gamma1_gains && gamma2_loses)) continue;
      const auto [g1, g2] = zeta_sinrs(c, zeta1, root);
      if (!solution.points.empty() && solution.points.back().zeta1 == zeta1 &&
          std::abs(solution.points.back().zeta2 - root) < 1e-10) {
        continue;  // bracket-edge duplicate
      }
      solution.points.push_back({zeta1, root, g1, g2});
      found = true;
    }
    if (!found) solution.skipped_zeta1.push_back(zeta1);
  }
  return solution;
}

}  // namespace icbeam
