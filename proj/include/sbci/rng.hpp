#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <random>

namespace sbci::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// One independent draw stream. mt19937_64 has a standard-defined output
// sequence and the bounded draws below avoid std::uniform_int_distribution,
// so a (seed, stream) pair yields the same numbers on every platform.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Unbiased integer in [0, bound) via rejection sampling.
  std::uint64_t next_below(std::uint64_t bound) {
    assert(bound > 0);
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    std::uint64_t v = gen_();
    while (v >= limit) v = gen_();
    return v % bound;
  }

  int uniform_int(int lo, int hi) {
    assert(lo <= hi);
    return lo + static_cast<int>(next_below(
                    static_cast<std::uint64_t>(hi) - lo + 1));
  }

 private:
  std::mt19937_64 gen_;
};

// Seed of stream k under a run seed: k+1 splitmix64 steps. Components
// draw from disjoint streams so adding draws to one never perturbs another.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  for (std::uint64_t k = 0; k <= stream; ++k) state = splitmix64(state);
  return state;
}

inline Stream derive_stream(std::uint64_t seed, std::uint64_t stream) {
  return Stream(derive_seed(seed, stream));
}

}  // namespace sbci::rng
