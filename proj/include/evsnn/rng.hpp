// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace evsnn {

/// splitmix64 finalizer. Used to derive independent seed streams from a user
/// seed plus a stream index, so that parallel and serial runs consume
/// identical random sequences per work item.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for sub-stream `index` of stream `seed` (e.g. per frame, per layer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index));
}

/// Deterministic engine for a derived stream.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index = 0) {
  return std::mt19937_64(derive_seed(seed, index));
}

/// Uniform double in [0, 1) from the top 53 bits. Implementation-independent,
/// unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). n must be positive. Modulo bias is negligible
/// for the ranges used here (n << 2^64) and keeps the draw reproducible
/// across standard libraries.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

/// Standard normal via Box-Muller; byte-reproducible across platforms.
/// Draws two engine values per call.
inline double normal01(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  // Guard log(0); shifts u1 into (0, 1].
  u1 = 1.0 - u1;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace evsnn
