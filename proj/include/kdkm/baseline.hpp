#pragma once

#include <cstdint>
#include <span>

#include "kdkm/filtering.hpp"
#include "kdkm/geometry.hpp"
#include "kdkm/metrics.hpp"

namespace kdkm {

// Brute-force Lloyd iteration state: the comparison baseline and the
// correctness oracle for the filtered traversal.
struct LloydState {
  CandidateSet centroids;
  std::vector<int> assignments;
};

// k distinct points sampled uniformly without replacement with the seeded
// generator. Throws when the input holds fewer than k distinct positions.
CandidateSet lloyd_init(std::span<const Point> points, int k, std::uint64_t seed);

// One assignment + update step over the full n*k distance scan. Assignment
// ties go to the lowest centroid index; empty clusters keep their position.
// The scan is split into fixed-size blocks reduced in block order, so the
// result is identical for any worker count. Returns the max centroid
// movement.
double lloyd_iterate(std::span<const Point> points, LloydState& state, Metric metric,
                     unsigned workers, Counters& counters);

// Iterates to convergence like run_filtering, with exactly n*k distance
// evaluations per iteration.
ClusteringResult run_lloyd(std::span<const Point> points, const CandidateSet& initial,
                           const FilterConfig& config, unsigned workers = 1);

// Sum of squared Euclidean distances from each point to its assigned
// centroid; the objective Lloyd monotonically decreases.
double within_cluster_sum_of_squares(std::span<const Point> points,
                                     std::span<const Point> centroids,
                                     std::span<const int> assignments);

}  // namespace kdkm
