#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kdkm/geometry.hpp"
#include "kdkm/kdtree.hpp"
#include "kdkm/metrics.hpp"

namespace kdkm {

// A candidate centroid plus the per-iteration accumulators the tree
// traversal feeds. acc_wgt_cent stays the zero vector while acc_count is 0.
struct Candidate {
  Point position;
  Point acc_wgt_cent;
  std::int64_t acc_count = 0;
  int index = 0;
};

struct CandidateSet {
  std::vector<Candidate> candidates;

  static CandidateSet from_positions(std::span<const Point> positions);

  int k() const { return static_cast<int>(candidates.size()); }
  void reset_accumulators();
  std::vector<Point> positions() const;
};

struct FilterConfig {
  Metric metric = Metric::Euclidean;
  // Convergence is declared once the maximum centroid movement in one
  // update drops to epsilon or below.
  double epsilon = 1e-9;
  int max_iterations = 1000;
};

// Index of the candidate nearest to target; ties go to the lowest index.
int closest_candidate(const Point& target, const CandidateSet& zs, Metric metric);
int closest_candidate(const Point& target, const CandidateSet& zs,
                      std::span<const int> active, Metric metric);

// Sound pruning test: true only if no point of the cell is strictly closer
// to z than to z_star. Euclidean uses the extreme-vertex test against the
// bisecting hyperplane; the other metrics use the conservative comparison of
// the min distance from z to the cell against the max distance from z_star.
bool is_farther(const Point& z, const Point& z_star, const BoundingBox& cell, Metric metric);

// One tree traversal: assigns every point under node to exactly one
// candidate accumulator, pruning candidates per cell on the way down and
// crediting whole subtrees when a single candidate survives. The root call
// must pass all candidate indices with accumulators zeroed.
void filter_pass(const KdNode& node, CandidateSet& zs, std::span<const int> active,
                 Metric metric, Counters& counters);
void filter_pass(const KdTree& tree, CandidateSet& zs, Metric metric, Counters& counters);

// Moves every candidate with a nonempty accumulator to its accumulated mean;
// empty candidates keep their position. Resets accumulators and returns the
// maximum movement under the given metric.
double update_step(CandidateSet& zs, Metric metric);

// Full run: filter_pass + update_step until convergence or the iteration
// cap, then one assignment-resolution pass over the stored points. The
// resolution pass is tallied in metrics.resolve_distance_evaluations, not in
// the per-iteration counters.
ClusteringResult run_filtering(const KdTree& tree, const CandidateSet& initial,
                               const FilterConfig& config);

}  // namespace kdkm
