#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace kdkm {

// Seeded randomness helpers. The <random> distribution classes are not
// pinned across standard libraries, so everything that must replay
// identically from a seed goes through these instead. The dataset generator
// records kGeneratorId in its output metadata.
inline constexpr const char* kGeneratorId = "mt19937_64/box-muller-v1";

// Uniform double in [0, 1).
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

// Unbiased uniform integer in [0, bound). bound must be positive.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

// Standard normal variates via the Box-Muller transform, caching the spare.
class NormalSampler {
 public:
  explicit NormalSampler(std::mt19937_64& rng) : rng_(rng) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform_unit(rng_);  // (0, 1], keeps log finite
    const double u2 = uniform_unit(rng_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64& rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Fisher-Yates shuffle driven by uniform_below, replayable from the seed.
template <typename T>
void deterministic_shuffle(std::vector<T>& values, std::mt19937_64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[uniform_below(rng, i)]);
  }
}

}  // namespace kdkm
