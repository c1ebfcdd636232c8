#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace nerb {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a master seed and a coordinate
// tuple (experiment cell, repetition index, ...). Same inputs, same seed.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> coords) {
  std::uint64_t state = master;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t c : coords) {
    state ^= c + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
    out = splitmix64(state);
  }
  return out;
}

// Deterministic RNG facade. All sampling primitives are hand-rolled on top
// of the raw mt19937_64 stream so that results do not depend on standard
// library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t u64() { return gen_(); }

  // Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n) {
    // rejection to avoid modulo bias
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  bool coin() { return (gen_() & 1ULL) != 0; }

  // Index sampled with probability proportional to weights[i].
  // Total weight must be positive.
  std::size_t weighted_index(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (r < acc) return i;
    }
    return weights.size() - 1;  // r landed on total due to rounding
  }

  // Derives a child RNG whose stream is independent of this one.
  Rng fork(std::uint64_t salt) {
    std::uint64_t s = gen_() ^ salt;
    return Rng(splitmix64(s));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace nerb
