// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>

namespace icbeam {

/// Deterministic random stream for channel sampling and initialization.
///
/// Wraps std::mt19937_64 (bit-exact across platforms by the standard) and
/// generates doubles/normals through fixed mappings, so a (seed, call
/// sequence) pair reproduces the same values everywhere. Distribution
/// classes from <random> are deliberately not used: their output is
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// splitmix64 finalizer; decorrelates consecutive inputs.
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Derives an independent stream seed from (base, stream_index).
  /// Used for per-trial and per-purpose substreams; adding streams never
  /// perturbs existing ones.
  static constexpr std::uint64_t derive(std::uint64_t base, std::uint64_t stream) {
    return mix(base ^ mix(stream + 0x6a09e667f3bcc909ULL));
  }

  /// Uniform double in [0, 1), 53-bit mantissa.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Pair of independent N(0,1) samples (Box-Muller; consumes 2 uniforms).
  std::pair<double, double> normal_pair() {
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard, probability 2^-53
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * pi() * uniform();
    return {r * std::cos(theta), r * std::sin(theta)};
  }

  /// One CN(0,1) sample: real and imaginary parts each N(0, 1/2).
  std::complex<double> complex_gaussian() {
    const auto [x, y] = normal_pair();
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    return {x * inv_sqrt2, y * inv_sqrt2};
  }

 private:
  static constexpr double pi() { return 3.14159265358979323846; }

  std::mt19937_64 engine_;
};

}  // namespace icbeam
