#pragma once

#include <cstdint>

#include "gonosim/numeric.hpp"
#include "gonosim/state.hpp"

namespace gonosim {

// Self-contained generator so sampled values are identical across platforms
// and standard library versions.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform on [0, n), bias-free multiply-shift with rejection
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = (unsigned __int128)next() * n;
    std::uint64_t low = std::uint64_t(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = (unsigned __int128)next() * n;
        low = std::uint64_t(m);
      }
    }
    return std::uint64_t(m >> 64);
  }

  double uniform01() { return double(next() >> 11) * 0x1.0p-53; }
};

// Streams keep samples independent of which checks run and how work is
// partitioned across threads: every (purpose, index) pair has its own state.
enum class SampleStream : std::uint64_t {
  Orbit = 1,
  Commutation = 2,
  RatioRectangle = 3,
  Boundary = 4,
  RawQuadrant = 5,
  UnnormalizedStart = 6,
};

inline SplitMix64 sample_rng(std::uint64_t seed, SampleStream stream, std::uint64_t index) {
  SplitMix64 mix(seed ^ (0x51a3c0de00000000ULL + std::uint64_t(stream)));
  const std::uint64_t a = mix.next();
  SplitMix64 out(a ^ (index * 0x2545f4914f6cdd1dULL + 0x123456789abcdef0ULL));
  out.next();
  return out;
}

inline constexpr long kDefaultDenominatorBound = 10000;
inline constexpr double kBoundaryMargin = 1e-3;  // minimum x+y and u+v after normalization

// Four independent uniform rationals num/den with num in [0, bound] and den
// in [1, bound], normalized to the simplex; draws too close to the degenerate
// set are rejected and redrawn.
inline PopulationState<Rational> sample_rational_state(SplitMix64& rng,
                                                       long bound = kDefaultDenominatorBound,
                                                       bool require_positive_xu = false) {
  while (true) {
    Rational c[4];
    for (auto& q : c) {
      const long num = long(rng.below(std::uint64_t(bound) + 1));
      const long den = 1 + long(rng.below(std::uint64_t(bound)));
      q = Rational(num, den);
      q.canonicalize();
    }
    Rational sum = c[0] + c[1] + c[2] + c[3];
    if (sum == 0) continue;
    for (auto& q : c) q /= sum;
    if (c[0] + c[1] < kBoundaryMargin || c[2] + c[3] < kBoundaryMargin) continue;
    if (require_positive_xu && (c[0] == 0 || c[2] == 0)) continue;
    return {c[0], c[1], c[2], c[3]};
  }
}

inline PopulationState<double> sample_f64_state(SplitMix64& rng,
                                                bool require_positive_xu = false) {
  while (true) {
    double c[4];
    double sum = 0;
    for (auto& q : c) {
      q = rng.uniform01();
      sum += q;
    }
    if (sum <= 0) continue;
    for (auto& q : c) q /= sum;
    if (c[0] + c[1] < kBoundaryMargin || c[2] + c[3] < kBoundaryMargin) continue;
    if (require_positive_xu && (c[0] <= 0 || c[2] <= 0)) continue;
    return {c[0], c[1], c[2], c[3]};
  }
}

template <class S>
PopulationState<S> sample_state(SplitMix64& rng, bool require_positive_xu = false) {
  if constexpr (scalar_traits<S>::exact)
    return sample_rational_state(rng, kDefaultDenominatorBound, require_positive_xu);
  else
    return sample_f64_state(rng, require_positive_xu);
}

// Point in the ratio rectangle {0 <= alpha <= 4, 0 <= beta <= 1}.
template <class S>
ReducedState<S> sample_ratio_point(SplitMix64& rng, long bound = kDefaultDenominatorBound) {
  if constexpr (scalar_traits<S>::exact) {
    auto draw_in = [&rng, bound](long hi) {
      const long den = 1 + long(rng.below(std::uint64_t(bound)));
      const long num = long(rng.below(std::uint64_t(hi) * den + 1));
      Rational q(num, den);
      q.canonicalize();
      return q;
    };
    return {draw_in(4), draw_in(1)};
  } else {
    return {4 * rng.uniform01(), rng.uniform01()};
  }
}

// Unconstrained nonnegative four-tuple for homogeneity checks.
template <class S>
RawState4<S> sample_raw4(SplitMix64& rng, long bound = kDefaultDenominatorBound) {
  if constexpr (scalar_traits<S>::exact) {
    Rational c[4];
    for (auto& q : c) {
      const long num = long(rng.below(std::uint64_t(bound) + 1));
      const long den = 1 + long(rng.below(std::uint64_t(bound)));
      q = Rational(num, den);
      q.canonicalize();
    }
    return {c[0], c[1], c[2], c[3]};
  } else {
    return {4 * rng.uniform01(), 4 * rng.uniform01(), 4 * rng.uniform01(), 4 * rng.uniform01()};
  }
}

}  // namespace gonosim
