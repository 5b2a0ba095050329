#ifndef FEPLAB_RNG_HPP
#define FEPLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace feplab {

// All randomness flows through std::mt19937_64 whose output sequence is fixed
// by the standard.  The helpers below avoid std::uniform_*_distribution on
// purpose: their output is implementation-defined, and we want trajectories
// and CSV outputs to be reproducible across compilers.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

// Stream for replicate i of an experiment with base seed s: derived from
// s ^ i, then whitened so that nearby indices give unrelated states.
inline Rng replicate_rng(std::uint64_t seed, std::uint64_t replicate) {
  return Rng(splitmix64(seed ^ replicate));
}

// Uniform integer in [0, bound) by rejection; exact and platform-stable.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

// Uniform integer in [lo, hi] inclusive.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(
                  uniform_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Exponential waiting time with the given rate.
inline double exponential(Rng& rng, double rate) {
  return -std::log1p(-uniform_unit(rng)) / rate;
}

}  // namespace feplab

#endif
