#pragma once

#include <cstdint>
#include <vector>

#include "kdkm/geometry.hpp"

namespace kdkm {

struct GenSpec {
  std::size_t n = 0;
  std::size_t dimensionality = 0;
  std::size_t n_clumps = 1;
  double stddev_low = 1.0;
  double stddev_high = 1.0;
  BoundingBox domain;
  std::uint64_t rng_seed = 1;
};

struct GroundTruth {
  std::vector<Point> means;
  std::vector<double> stddevs;
  std::vector<int> labels;
};

struct GeneratedDataset {
  std::vector<Point> points;
  GroundTruth truth;
};

// Gaussian clumps with uniformly placed means. Points come out grouped by
// clump, sizes n/n_clumps with the remainder spread over the earliest clumps.
GeneratedDataset generate(const GenSpec& spec);

}  // namespace kdkm
