#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace latproj {

// Counter-based generator: value i of stream `seed` is a pure function of
// (seed, i), so draws are reproducible and order-independent.
struct CounterRng {
  std::uint64_t seed = 0;

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(mix(seed) ^ mix(counter * 0x632be59bd9b4e019ull + 0x9e3779b97f4a7c15ull));
  }

  // Uniform in [0, 1).
  double uniform(std::uint64_t counter) const {
    return (bits(counter) >> 11) * 0x1.0p-53;
  }

  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * uniform(counter);
  }

  // Box-Muller pair from counters (2c, 2c+1).
  std::pair<double, double> gaussian_pair(std::uint64_t counter) const {
    double u1 = uniform(2 * counter);
    double u2 = uniform(2 * counter + 1);
    if (u1 < 1e-300) u1 = 1e-300;
    double r = std::sqrt(-2.0 * std::log(u1));
    double phi = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }
};

}  // namespace latproj
