#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kdkm/geometry.hpp"

namespace kdkm {

// Portable work counters. distance_evaluations counts metric evaluations
// between a data point and a candidate position -- the quantity a full scan
// spends n*k of per iteration. Geometry work done to prune (midpoint and
// vertex distances) is tallied separately in pruning_evaluations.
struct Counters {
  std::uint64_t distance_evaluations = 0;
  std::uint64_t pruning_evaluations = 0;
  std::uint64_t node_visits = 0;
};

struct RunMetrics {
  Counters counters;
  // In-loop point-to-candidate evaluations, one entry per iteration.
  std::vector<std::uint64_t> distance_evaluations_per_iteration;
  // The final assignment-resolution pass over the raw points, kept out of
  // the per-iteration tallies.
  std::uint64_t resolve_distance_evaluations = 0;
  std::uint64_t peak_tree_bytes_estimate = 0;
  std::vector<std::pair<std::string, double>> phase_seconds;
  double total_seconds = 0.0;

  void add_phase(std::string name, double seconds) {
    phase_seconds.emplace_back(std::move(name), seconds);
  }
  double phase(const std::string& name) const {
    for (const auto& [n, s] : phase_seconds) {
      if (n == name) return s;
    }
    return 0.0;
  }
};

struct ClusteringResult {
  std::vector<Point> centroids;
  // Cluster index per point, aligned to the original point order.
  std::vector<int> assignments;
  // Iterations of the main convergence loop. For two-level runs this is the
  // level-2 refinement; the per-shard counts land in iterations_level1.
  int iterations = 0;
  std::vector<int> iterations_level1;
  RunMetrics metrics;
};

}  // namespace kdkm
