#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace fcdn {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to turn structured keys into seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent seed from a master seed and a key path, e.g.
/// (master, stream tag, algorithm, K_o, K_e, trial).
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> key) noexcept {
  std::uint64_t h = mix64(master);
  for (auto k : key) {
    h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  }
  return h;
}

/// Uniform double in [0, 1) with 53 random bits. Spelled out instead of
/// std::uniform_real_distribution so the stream is the same on every
/// standard library.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform double in (0, 1].
inline double uniform01_open_low(Rng& rng) { return 1.0 - uniform01(rng); }

inline double exponential(Rng& rng, double rate) {
  return -std::log(uniform01_open_low(rng)) / rate;
}

}  // namespace fcdn
