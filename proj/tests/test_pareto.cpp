// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch.hpp>

#include "test_helpers.hpp"

using namespace icbeam;

namespace {

MisoScenario random_scenario(int n_tx, double rho, std::uint64_t seed) {
  Rng rng(seed);
  MisoScenario s;
  s.h11 = sample_complex_gaussian(n_tx, 1, rng);
  s.h12 = sample_complex_gaussian(n_tx, 1, rng);
  s.h21 = sample_complex_gaussian(n_tx, 1, rng);
  s.h22 = sample_complex_gaussian(n_tx, 1, rng);
  s.rho = rho;
  return s;
}

MisoScenario symmetric_scenario(int n_tx, double rho, std::uint64_t seed) {
  Rng rng(seed);
  MisoScenario s;
  s.h11 = sample_complex_gaussian(n_tx, 1, rng);
  s.h12 = sample_complex_gaussian(n_tx, 1, rng);
  s.h21 = s.h12;  // both links see the same geometry
  s.h22 = s.h11;
  s.rho = rho;
  return s;
}

Complex row_apply(const CVector& h_row, const CVector& w) {
  return (h_row.transpose() * w)(0, 0);
}

/// Two-link single-receive-antenna channel set: rx beams are the scalar 1,
/// P = rho, unit noise. Cross-checks the closed forms against the general
/// SINR evaluation.
ChannelSet miso_channel_set(const MisoScenario& s) {
  ChannelSet cs;
  cs.n_links = 2;
  cs.n_tx = static_cast<int>(s.h11.size());
  cs.n_rx = 1;
  cs.power = s.rho;
  cs.gains = RMatrix::Ones(2, 2);
  cs.noise_powers = RVector::Ones(2);
  cs.channels = {s.h11.transpose(), s.h12.transpose(), s.h21.transpose(), s.h22.transpose()};
  return cs;
}

}  // namespace

TEST_CASE("zeta coefficients") {
  SECTION("direct channel orthogonal to the cross channel: a1 = 0") {
    MisoScenario s;
    s.h11 = CVector::Unit(2, 0);
    s.h21 = CVector::Unit(2, 1);  // Tx 1 interferes through e2
    s.h12 = CVector::Unit(2, 0);
    s.h22 = CVector::Unit(2, 1);
    s.rho = 1.0;
    const auto c = zeta_coefficients(s);
    CHECK(c.a1 == Approx(0.0).margin(1e-14));
    CHECK(c.b1 == Approx(1.0).epsilon(1e-12));
  }
  SECTION("direct channel parallel to the cross channel: b1 = 0") {
    MisoScenario s;
    s.h11 = CVector::Unit(2, 0);
    s.h21 = 2.0 * CVector::Unit(2, 0);
    s.h12 = CVector::Unit(2, 1);
    s.h22 = CVector::Unit(2, 0);
    s.rho = 2.0;
    const auto c = zeta_coefficients(s);
    CHECK(c.b1 == Approx(0.0).margin(1e-14));
    CHECK(c.a1 == Approx(1.0).epsilon(1e-12));
    CHECK(c.c1 == Approx(2.0 * 4.0).epsilon(1e-12));
  }
  SECTION("projection Pythagoras: a + b equals the direct channel power") {
    for (int seed = 0; seed < 20; ++seed) {
      const auto s = random_scenario(3, 5.0, 2000 + seed);
      const auto c = zeta_coefficients(s);
      REQUIRE(c.a1 + c.b1 == Approx(s.h11.squaredNorm()).epsilon(1e-12));
      REQUIRE(c.a2 + c.b2 == Approx(s.h22.squaredNorm()).epsilon(1e-12));
      REQUIRE(c.zeta_max_1 >= 0.0);
      REQUIRE(c.zeta_max_1 <= 1.0);
    }
  }
  SECTION("zero cross channel is degenerate") {
    auto s = random_scenario(2, 1.0, 3);
    s.h21 = CVector::Zero(2);
    CHECK_THROWS_AS(zeta_coefficients(s), DegenerateInputError);
  }
}

TEST_CASE("zeta beamformer") {
  const auto s = random_scenario(3, 10.0, 90);
  const auto c = zeta_coefficients(s);
  SECTION("zeta = 0 is the zero-forcing direction") {
    const CVector w = zeta_beamformer(s, 1, 0.0);
    CHECK(std::abs(row_apply(s.h21, w)) <= 1e-10 * s.h21.norm());
    CHECK(std::abs(w.norm() - 1.0) <= 1e-12);
  }
  SECTION("zeta = zeta_max is maximum-ratio transmission") {
    const CVector w = zeta_beamformer(s, 1, c.zeta_max_1);
    CHECK(std::norm(row_apply(s.h11, w)) == Approx(c.a1 + c.b1).epsilon(1e-10));
    // parallel to the conjugate direct channel
    CHECK(chordal_distance(w, s.h11.conjugate().normalized()) <= 1e-7);
  }
  SECTION("closed-form powers match explicit vector arithmetic") {
    Rng rng(91);
    for (int trial = 0; trial < 50; ++trial) {
      const double zeta = rng.uniform();
      const CVector w = zeta_beamformer(s, 1, zeta);
      const double direct = std::norm(row_apply(s.h11, w));
      const double cross = std::norm(row_apply(s.h21, w));
      const double n1 = std::sqrt(c.a1 * zeta) + std::sqrt(c.b1 * (1.0 - zeta));
      REQUIRE(direct == Approx(n1 * n1).epsilon(1e-10));
      REQUIRE(cross == Approx(zeta * s.h21.squaredNorm()).epsilon(1e-10).margin(1e-12));
      REQUIRE(std::abs(w.norm() - 1.0) <= 1e-10);
    }
  }
  SECTION("parametrization completeness over the nonnegative span") {
    Rng rng(92);
    const CMatrix pi = projector_onto(s.h21);
    const CVector d = s.h11.conjugate();
    const CVector ua = (pi * d).normalized();
    const CVector ub = (d - pi * d).normalized();
    for (int trial = 0; trial < 100; ++trial) {
      const double alpha = rng.uniform();
      const double a = std::sqrt(alpha);
      const double b = std::sqrt(1.0 - alpha);
      const CVector w = a * ua + b * ub;
      const double zeta = a * a;
      const CVector w_zeta = zeta_beamformer(s, 1, zeta);
      REQUIRE(std::abs(std::norm(row_apply(s.h11, w)) - std::norm(row_apply(s.h11, w_zeta))) <=
              1e-8 * (1.0 + std::norm(row_apply(s.h11, w))));
      REQUIRE(std::abs(std::norm(row_apply(s.h21, w)) - std::norm(row_apply(s.h21, w_zeta))) <=
              1e-8 * (1.0 + std::norm(row_apply(s.h21, w))));
    }
  }
  SECTION("zeta outside [0, 1] is rejected") {
    CHECK_THROWS_AS(zeta_beamformer(s, 1, -0.01), DomainError);
    CHECK_THROWS_AS(zeta_beamformer(s, 2, 1.01), DomainError);
  }
}

TEST_CASE("closed-form SINRs") {
  const auto s = random_scenario(3, 10.0, 93);
  const auto c = zeta_coefficients(s);
  SECTION("no interference from link 2 leaves the pure beamforming gain") {
    const double zeta1 = 0.4;
    const auto [g1, g2] = zeta_sinrs(c, zeta1, 0.0);
    const double n1 = std::sqrt(c.a1 * zeta1) + std::sqrt(c.b1 * 0.6);
    CHECK(g1 == Approx(s.rho * n1 * n1).epsilon(1e-12));
  }
  SECTION("MRT without interference gives rho (a1 + b1)") {
    const auto [g1, g2] = zeta_sinrs(c, c.zeta_max_1, 0.0);
    CHECK(g1 == Approx(s.rho * (c.a1 + c.b1)).epsilon(1e-10));
  }
  SECTION("matches the full-system SINR through zeta beamformers") {
    const auto cs = miso_channel_set(s);
    Rng rng(94);
    for (int trial = 0; trial < 25; ++trial) {
      const double z1 = rng.uniform();
      const double z2 = rng.uniform();
      BeamformerProfile p;
      p.tx_beams = {zeta_beamformer(s, 1, z1), zeta_beamformer(s, 2, z2)};
      p.rx_beams = {CVector::Ones(1), CVector::Ones(1)};
      const auto [g1, g2] = zeta_sinrs(c, z1, z2);
      REQUIRE(sinr(cs, p, 0) == Approx(g1).epsilon(1e-10));
      REQUIRE(sinr(cs, p, 1) == Approx(g2).epsilon(1e-10));
    }
  }
}

TEST_CASE("closed-form partials") {
  const auto s = random_scenario(4, 25.0, 95);
  const auto c = zeta_coefficients(s);
  SECTION("more interference always hurts") {
    Rng rng(96);
    for (int trial = 0; trial < 50; ++trial) {
      const double z1 = 0.01 + 0.98 * rng.uniform();
      const double z2 = 0.01 + 0.98 * rng.uniform();
      REQUIRE(sinr_partials(c, z1, z2).dg1_dz2 < 0.0);
      REQUIRE(sinr_partials(c, z1, z2).dg2_dz1 < 0.0);
    }
  }
  SECTION("own-gain derivative vanishes at zeta_max") {
    const auto p = sinr_partials(c, c.zeta_max_1, 0.5);
    CHECK(p.dg1_dz1 == Approx(0.0).margin(1e-9 * s.rho * (c.a1 + c.b1)));
  }
  SECTION("matches central finite differences at 100 random interior points") {
    Rng rng(97);
    for (int trial = 0; trial < 100; ++trial) {
      const double z1 = 0.02 + 0.96 * rng.uniform();
      const double z2 = 0.02 + 0.96 * rng.uniform();
      const auto p = sinr_partials(c, z1, z2);
      const double h = 1e-6;
      auto g1_at = [&](double a, double b) { return zeta_sinrs(c, a, b).first; };
      auto g2_at = [&](double a, double b) { return zeta_sinrs(c, a, b).second; };
      const double fd11 = (g1_at(z1 + h, z2) - g1_at(z1 - h, z2)) / (2 * h);
      const double fd12 = (g1_at(z1, z2 + h) - g1_at(z1, z2 - h)) / (2 * h);
      const double fd21 = (g2_at(z1 + h, z2) - g2_at(z1 - h, z2)) / (2 * h);
      const double fd22 = (g2_at(z1, z2 + h) - g2_at(z1, z2 - h)) / (2 * h);
      REQUIRE(p.dg1_dz1 == Approx(fd11).epsilon(1e-5).margin(1e-7));
      REQUIRE(p.dg1_dz2 == Approx(fd12).epsilon(1e-5).margin(1e-7));
      REQUIRE(p.dg2_dz1 == Approx(fd21).epsilon(1e-5).margin(1e-7));
      REQUIRE(p.dg2_dz2 == Approx(fd22).epsilon(1e-5).margin(1e-7));
    }
  }
  SECTION("endpoints are out of domain") {
    CHECK_THROWS_AS(sinr_partials(c, 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(sinr_partials(c, 0.5, 1.0), DomainError);
  }
}

TEST_CASE("boundary balance") {
  const auto s = random_scenario(3, 10.0, 98);
  const auto c = zeta_coefficients(s);
  SECTION("sweeping zeta1 at fixed zeta2 crosses zero") {
    const double z2 = 0.5 * c.zeta_max_2;
    double lo = boundary_balance(c, 1e-9 * c.zeta_max_1, z2);
    double hi = boundary_balance(c, (1.0 - 1e-9) * c.zeta_max_1, z2);
    CHECK(lo > 0.0);
    CHECK(hi < 0.0);
  }
  SECTION("near both zeta_max values the balance is dominated by the right side") {
    const double b = boundary_balance(c, 0.999 * c.zeta_max_1, 0.999 * c.zeta_max_2);
    CHECK(b < 0.0);
  }
  SECTION("a symmetric scenario has a diagonal root") {
    const auto sym = symmetric_scenario(3, 10.0, 99);
    const auto cc = zeta_coefficients(sym);
    REQUIRE(cc.zeta_max_1 == Approx(cc.zeta_max_2).epsilon(1e-12));
    // scan the diagonal for a sign change
    double prev = boundary_balance(cc, 1e-6 * cc.zeta_max_1, 1e-6 * cc.zeta_max_2);
    bool crossed = false;
    for (int k = 1; k <= 1000; ++k) {
      const double z = cc.zeta_max_1 * (1e-6 + (1.0 - 2e-6) * k / 1000.0);
      const double b = boundary_balance(cc, z, z);
      if ((b > 0) != (prev > 0)) crossed = true;
      prev = b;
    }
    CHECK(crossed);
  }
  SECTION("endpoints are out of domain") {
    CHECK_THROWS_AS(boundary_balance(c, 0.0, 0.5 * c.zeta_max_2), DomainError);
    CHECK_THROWS_AS(boundary_balance(c, 0.5 * c.zeta_max_1, c.zeta_max_2), DomainError);
  }
}

TEST_CASE("boundary solver") {
  SECTION("symmetric scenarios give swap-symmetric curves") {
    const auto s = symmetric_scenario(3, 10.0, 100);
    const auto c = zeta_coefficients(s);
    const auto solution = solve_boundary(s, 12);
    REQUIRE_FALSE(solution.points.empty());
    for (const auto& p : solution.points) {
      // the swapped pair satisfies the boundary equation as well
      const auto [g1s, g2s] = zeta_sinrs(c, p.zeta2, p.zeta1);
      REQUIRE(g1s == Approx(p.gamma2).epsilon(1e-8));
      REQUIRE(g2s == Approx(p.gamma1).epsilon(1e-8));
      if (p.zeta1 > 1e-7 && p.zeta1 < c.zeta_max_1 * (1 - 1e-7)) {
        const double swapped = boundary_balance(c, p.zeta2, p.zeta1);
        const double scale = 1.0 + std::abs(boundary_balance(c, p.zeta2, p.zeta1 * 0.5));
        REQUIRE(std::abs(swapped) <= 1e-6 * scale);
      }
    }
  }
  SECTION("every boundary point is undominated on a 200x200 grid") {
    for (int scenario = 0; scenario < 3; ++scenario) {
      const auto s = random_scenario(2 + scenario, 10.0, 3000 + scenario);
      const auto c = zeta_coefficients(s);
      const auto solution = solve_boundary(s, 10);
      REQUIRE_FALSE(solution.points.empty());
      for (const auto& p : solution.points) {
        for (int i = 0; i <= 200; ++i) {
          for (int j = 0; j <= 200; ++j) {
            const auto [g1, g2] =
                zeta_sinrs(c, c.zeta_max_1 * i / 200.0, c.zeta_max_2 * j / 200.0);
            const bool dominates = g1 >= p.gamma1 + 1e-9 && g2 >= p.gamma2 + 1e-9;
            REQUIRE_FALSE(dominates);
          }
        }
      }
    }
  }
  SECTION("gammas on the curve match the closed form") {
    const auto s = random_scenario(3, 100.0, 101);
    const auto c = zeta_coefficients(s);
    const auto solution = solve_boundary(s, 8);
    for (const auto& p : solution.points) {
      const auto [g1, g2] = zeta_sinrs(c, p.zeta1, p.zeta2);
      REQUIRE(p.gamma1 == Approx(g1).epsilon(1e-10));
      REQUIRE(p.gamma2 == Approx(g2).epsilon(1e-10));
    }
  }
  SECTION("vanishing SNR collapses the boundary to the MRT corner") {
    const auto s = random_scenario(3, 1e-4, 102);
    const auto c = zeta_coefficients(s);
    const auto solution = solve_boundary(s, 48);
    REQUIRE_FALSE(solution.points.empty());
    const double u1 = s.rho * (c.a1 + c.b1);
    const double u2 = s.rho * (c.a2 + c.b2);
    double best = std::numeric_limits<double>::max();
    ParetoPoint nearest;
    for (const auto& p : solution.points) {
      const double d = std::hypot(p.gamma1 - u1, p.gamma2 - u2);
      if (d < best) {
        best = d;
        nearest = p;
      }
    }
    CHECK(std::abs(nearest.gamma1 - u1) <= 0.01 * u1);
    CHECK(std::abs(nearest.gamma2 - u2) <= 0.01 * u2);
  }
  SECTION("degenerate scenarios yield a single warned point") {
    MisoScenario s;
    s.h11 = CVector::Unit(3, 0);
    s.h21 = CVector::Unit(3, 1);  // orthogonal: link 1 collapses
    s.h12 = CVector::Unit(3, 2);
    s.h22 = CVector::Unit(3, 0);
    s.rho = 10.0;
    const auto solution = solve_boundary(s, 8);
    CHECK(solution.degenerate);
    CHECK_FALSE(solution.warning.empty());
    REQUIRE(solution.points.size() == 1);
  }
  SECTION("fewer than two points is invalid") {
    CHECK_THROWS_AS(solve_boundary(random_scenario(2, 1.0, 103), 1), DomainError);
  }
}
