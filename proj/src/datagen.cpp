#include "kdkm/datagen.hpp"

#include <random>
#include <stdexcept>

#include "kdkm/rng.hpp"

namespace kdkm {

GeneratedDataset generate(const GenSpec& spec) {
  if (spec.n_clumps < 1 || spec.n < spec.n_clumps) {
    throw std::invalid_argument("generate: need n >= n_clumps >= 1");
  }
  if (!(spec.stddev_low > 0.0) || spec.stddev_low > spec.stddev_high) {
    throw std::invalid_argument("generate: need 0 < stddev_low <= stddev_high");
  }
  const std::size_t dim = spec.dimensionality;
  if (dim < 1) throw std::invalid_argument("generate: dimensionality must be >= 1");
  if (spec.domain.dimensionality() != dim) {
    throw std::invalid_argument("generate: domain box dimensionality mismatch");
  }
  for (std::size_t d = 0; d < dim; ++d) {
    if (spec.domain.lo[d] > spec.domain.hi[d]) {
      throw std::invalid_argument("generate: domain box has lo > hi");
    }
  }

  std::mt19937_64 rng(spec.rng_seed);
  GeneratedDataset out;
  out.truth.means.reserve(spec.n_clumps);
  out.truth.stddevs.reserve(spec.n_clumps);

  // Fixed draw order (all means, then all stddevs, then points) keeps the
  // stream layout stable when only n changes.
  for (std::size_t c = 0; c < spec.n_clumps; ++c) {
    Point mean(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      mean[d] = uniform_in(rng, spec.domain.lo[d], spec.domain.hi[d]);
    }
    out.truth.means.push_back(std::move(mean));
  }
  for (std::size_t c = 0; c < spec.n_clumps; ++c) {
    out.truth.stddevs.push_back(uniform_in(rng, spec.stddev_low, spec.stddev_high));
  }

  out.points.reserve(spec.n);
  out.truth.labels.reserve(spec.n);
  NormalSampler normal(rng);
  const std::size_t base = spec.n / spec.n_clumps;
  const std::size_t remainder = spec.n % spec.n_clumps;
  for (std::size_t c = 0; c < spec.n_clumps; ++c) {
    const std::size_t count = base + (c < remainder ? 1 : 0);
    const Point& mean = out.truth.means[c];
    const double stddev = out.truth.stddevs[c];
    for (std::size_t i = 0; i < count; ++i) {
      Point p(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        p[d] = mean[d] + stddev * normal();
      }
      out.points.push_back(std::move(p));
      out.truth.labels.push_back(static_cast<int>(c));
    }
  }
  return out;
}

}  // namespace kdkm
