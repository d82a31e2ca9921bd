#pragma once

#include <array>
#include <cstdint>

namespace mola {

/// xoshiro256** (Blackman & Vigna, 2018) seeded through SplitMix64.
///
/// The generator is pinned here rather than taken from <random> so that
/// fixtures are reproducible across standard libraries and languages:
/// the state is initialised with four successive SplitMix64 outputs of the
/// seed, `uniform()` maps the top 53 bits to [0, 1), and `gaussian()` uses
/// the basic Box-Muller transform, consuming two uniforms per pair and
/// caching the second (sine) deviate.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();
  double uniform();
  double gaussian();

 private:
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mola
