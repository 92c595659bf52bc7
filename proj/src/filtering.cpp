#include "kdkm/filtering.hpp"

#include <chrono>
#include <stdexcept>

namespace kdkm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

CandidateSet CandidateSet::from_positions(std::span<const Point> positions) {
  if (positions.empty()) throw std::invalid_argument("CandidateSet: need at least one position");
  CandidateSet zs;
  zs.candidates.reserve(positions.size());
  int index = 0;
  for (const Point& p : positions) {
    zs.candidates.push_back(Candidate{p, Point(p.size(), 0.0), 0, index++});
  }
  return zs;
}

void CandidateSet::reset_accumulators() {
  for (Candidate& c : candidates) {
    c.acc_wgt_cent.assign(c.position.size(), 0.0);
    c.acc_count = 0;
  }
}

std::vector<Point> CandidateSet::positions() const {
  std::vector<Point> out;
  out.reserve(candidates.size());
  for (const Candidate& c : candidates) out.push_back(c.position);
  return out;
}

int closest_candidate(const Point& target, const CandidateSet& zs, Metric metric) {
  if (zs.candidates.empty()) throw std::invalid_argument("closest_candidate: empty candidate set");
  int best = zs.candidates[0].index;
  double best_d = comparable_distance(target, zs.candidates[0].position, metric);
  for (std::size_t i = 1; i < zs.candidates.size(); ++i) {
    const double d = comparable_distance(target, zs.candidates[i].position, metric);
    if (d < best_d) {
      best_d = d;
      best = zs.candidates[i].index;
    }
  }
  return best;
}

int closest_candidate(const Point& target, const CandidateSet& zs,
                      std::span<const int> active, Metric metric) {
  if (active.empty()) throw std::invalid_argument("closest_candidate: empty candidate set");
  int best = active[0];
  double best_d = comparable_distance(target, zs.candidates[active[0]].position, metric);
  for (int idx : active.subspan(1)) {
    const double d = comparable_distance(target, zs.candidates[idx].position, metric);
    if (d < best_d) {
      best_d = d;
      best = idx;
    }
  }
  return best;
}

bool is_farther(const Point& z, const Point& z_star, const BoundingBox& cell, Metric metric) {
  if (metric == Metric::Euclidean) {
    Point direction(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) direction[i] = z[i] - z_star[i];
    const Point v = extreme_vertex(cell, direction);
    return comparable_distance(z, v, metric) >= comparable_distance(z_star, v, metric);
  }
  return min_distance(z, cell, metric) >= max_distance(z_star, cell, metric);
}

namespace {

void add_point(Candidate& c, const Point& p) {
  for (std::size_t d = 0; d < p.size(); ++d) c.acc_wgt_cent[d] += p[d];
  c.acc_count += 1;
}

void add_node(Candidate& c, const KdNode& node) {
  for (std::size_t d = 0; d < node.wgt_cent.size(); ++d) c.acc_wgt_cent[d] += node.wgt_cent[d];
  c.acc_count += node.count;
}

}  // namespace

void filter_pass(const KdNode& node, CandidateSet& zs, std::span<const int> active,
                 Metric metric, Counters& counters) {
  ++counters.node_visits;

  if (node.is_leaf()) {
    if (node.uniform_leaf) {
      // One stored position (possibly repeated): a single argmin covers all.
      const int star = closest_candidate(node.points[0], zs, active, metric);
      counters.distance_evaluations += active.size();
      add_node(zs.candidates[star], node);
    } else {
      for (const Point& p : node.points) {
        const int star = closest_candidate(p, zs, active, metric);
        counters.distance_evaluations += active.size();
        add_point(zs.candidates[star], p);
      }
    }
    return;
  }

  int star = active[0];
  if (active.size() > 1) {
    const Point mid = midpoint(node.cell);
    star = closest_candidate(mid, zs, active, metric);
    counters.pruning_evaluations += active.size();
  }

  std::vector<int> surviving;
  if (active.size() > 1) {
    surviving.reserve(active.size());
    for (int idx : active) {
      if (idx == star) {
        surviving.push_back(idx);
        continue;
      }
      counters.pruning_evaluations += 2;
      if (!is_farther(zs.candidates[idx].position, zs.candidates[star].position, node.cell,
                      metric)) {
        surviving.push_back(idx);
      }
    }
  }

  if (active.size() == 1 || surviving.size() == 1) {
    add_node(zs.candidates[star], node);
    return;
  }
  filter_pass(*node.left, zs, surviving, metric, counters);
  filter_pass(*node.right, zs, surviving, metric, counters);
}

void filter_pass(const KdTree& tree, CandidateSet& zs, Metric metric, Counters& counters) {
  std::vector<int> active(zs.candidates.size());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = static_cast<int>(i);
  filter_pass(tree.root(), zs, active, metric, counters);
}

double update_step(CandidateSet& zs, Metric metric) {
  double max_movement = 0.0;
  for (Candidate& c : zs.candidates) {
    if (c.acc_count > 0) {
      Point next(c.position.size());
      for (std::size_t d = 0; d < next.size(); ++d) {
        next[d] = c.acc_wgt_cent[d] / static_cast<double>(c.acc_count);
      }
      max_movement = std::max(max_movement, distance(c.position, next, metric));
      c.position = std::move(next);
    }
    // Empty candidates stay put and contribute zero movement.
  }
  zs.reset_accumulators();
  return max_movement;
}

namespace {

void resolve_leaves(const KdNode& node, const CandidateSet& zs, Metric metric,
                    std::vector<int>& assignments, std::uint64_t& evaluations) {
  if (node.is_leaf()) {
    for (std::size_t i = 0; i < node.points.size(); ++i) {
      assignments[node.original_indices[i]] = closest_candidate(node.points[i], zs, metric);
      evaluations += zs.candidates.size();
    }
    return;
  }
  resolve_leaves(*node.left, zs, metric, assignments, evaluations);
  resolve_leaves(*node.right, zs, metric, assignments, evaluations);
}

}  // namespace

ClusteringResult run_filtering(const KdTree& tree, const CandidateSet& initial,
                               const FilterConfig& config) {
  const int k = initial.k();
  if (k == 0) throw std::invalid_argument("run_filtering: k must be >= 1");
  if (static_cast<std::size_t>(k) > tree.size()) {
    throw std::invalid_argument("run_filtering: k exceeds the number of points");
  }
  if (config.max_iterations < 1) {
    throw std::invalid_argument("run_filtering: max_iterations must be >= 1");
  }

  const auto start = Clock::now();
  ClusteringResult result;
  result.metrics.peak_tree_bytes_estimate = tree.memory_bytes_estimate();

  CandidateSet zs = initial;
  zs.reset_accumulators();

  const auto iterate_start = Clock::now();
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    const std::uint64_t evals_before = result.metrics.counters.distance_evaluations;
    filter_pass(tree, zs, config.metric, result.metrics.counters);
    result.metrics.distance_evaluations_per_iteration.push_back(
        result.metrics.counters.distance_evaluations - evals_before);
    const double movement = update_step(zs, config.metric);
    ++result.iterations;
    if (movement <= config.epsilon) break;
  }
  result.metrics.add_phase("iterate", seconds_since(iterate_start));

  const auto resolve_start = Clock::now();
  result.assignments.assign(tree.index_bound(), -1);
  resolve_leaves(tree.root(), zs, config.metric, result.assignments,
                 result.metrics.resolve_distance_evaluations);
  result.metrics.add_phase("resolve", seconds_since(resolve_start));

  result.centroids = zs.positions();
  result.metrics.total_seconds = seconds_since(start);
  return result;
}

}  // namespace kdkm
