#pragma once

#include <cstdint>

namespace simcamp {

/// SplitMix64 stream. Fixed bit-exactly so independently written
/// simulator implementations can reproduce identical result files.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw in (0, 1]: top 53 bits scaled by 2^-53, with 0
  /// remapped to 2^-53 so logarithms are always finite.
  double next_unit() {
    double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return u == 0.0 ? 0x1.0p-53 : u;
  }
};

/// Seed for one repetition: a single SplitMix64 step of base_seed + rep.
/// Every configuration shares the seed of a given repetition index
/// (seed-set semantics), so repetition r is driven by the same random
/// stream across the whole campaign.
inline std::uint64_t seed_for(std::uint64_t base_seed, int rep) {
  SplitMix64 g{base_seed + static_cast<std::uint64_t>(rep)};
  return g.next();
}

}  // namespace simcamp
