#pragma once

#include <cmath>
#include <cstdint>

namespace pogd {

// Counter-based deterministic random source.
//
// Every draw is a pure function of (seed, counter), so runs are replayable
// from the recorded seed alone and independent substreams never share state.
// Output discipline, fixed so traces can be reproduced in any language:
//
//   word(c)    = splitmix64 finalizer applied to  seed + (c + 1) * GAMMA
//   uniform(c) = (word(c) >> 11) * 2^-53                      in [0, 1)
//   sign(c)    = +1 if the top bit of word(c) is 0, else -1
//   normal(k)  = sqrt(-2 ln(1 - uniform(2k))) * cos(2 pi uniform(2k + 1))
//   substream(tag) = CounterRng seeded with word(tag)
//
// GAMMA = 0x9E3779B97F4A7C15.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t word(std::uint64_t counter) const {
    return mix64(seed_ + (counter + 1) * 0x9E3779B97F4A7C15ull);
  }

  double uniform(std::uint64_t counter) const {
    return static_cast<double>(word(counter) >> 11) * 0x1.0p-53;
  }

  double sign(std::uint64_t counter) const {
    return (word(counter) >> 63) == 0 ? 1.0 : -1.0;
  }

  double normal(std::uint64_t pair_index) const {
    const double u1 = uniform(2 * pair_index);
    const double u2 = uniform(2 * pair_index + 1);
    return std::sqrt(-2.0 * std::log1p(-u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  CounterRng substream(std::uint64_t tag) const { return CounterRng(word(tag)); }

 private:
  std::uint64_t seed_;
};

}  // namespace pogd
