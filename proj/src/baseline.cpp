#include "kdkm/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <stdexcept>

#include "kdkm/parallel.hpp"
#include "kdkm/rng.hpp"

namespace kdkm {

namespace {

using Clock = std::chrono::steady_clock;

// Fixed block size keeps partial sums at the same boundaries for every
// worker count, so the block-ordered reduction is scheduling-independent.
constexpr std::size_t kScanBlock = 4096;

struct BlockAccumulator {
  std::vector<Point> sums;           // per cluster
  std::vector<std::int64_t> counts;  // per cluster
};

}  // namespace

CandidateSet lloyd_init(std::span<const Point> points, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("lloyd_init: k must be >= 1");
  if (points.empty()) throw std::invalid_argument("lloyd_init: empty point collection");

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<Point> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  // Partial Fisher-Yates; duplicates of already-chosen positions are skipped
  // so the picks are k distinct points.
  for (std::size_t i = 0; i < order.size() && chosen.size() < static_cast<std::size_t>(k); ++i) {
    const std::size_t j = i + uniform_below(rng, order.size() - i);
    std::swap(order[i], order[j]);
    const Point& p = points[order[i]];
    if (std::find(chosen.begin(), chosen.end(), p) == chosen.end()) {
      chosen.push_back(p);
    }
  }
  if (chosen.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("lloyd_init: fewer than k distinct points in the input");
  }
  return CandidateSet::from_positions(chosen);
}

double lloyd_iterate(std::span<const Point> points, LloydState& state, Metric metric,
                     unsigned workers, Counters& counters) {
  const std::size_t n = points.size();
  const std::size_t k = state.centroids.candidates.size();
  if (k == 0 || k > n) throw std::invalid_argument("lloyd_iterate: need 1 <= k <= n");
  const std::size_t dim = points[0].size();

  state.assignments.resize(n);
  const std::size_t n_blocks = (n + kScanBlock - 1) / kScanBlock;
  std::vector<BlockAccumulator> blocks(n_blocks);

  parallel_for(n_blocks, workers, [&](std::size_t b) {
    BlockAccumulator& acc = blocks[b];
    acc.sums.assign(k, Point(dim, 0.0));
    acc.counts.assign(k, 0);
    const std::size_t begin = b * kScanBlock;
    const std::size_t end = std::min(n, begin + kScanBlock);
    for (std::size_t i = begin; i < end; ++i) {
      const int best = closest_candidate(points[i], state.centroids, metric);
      state.assignments[i] = best;
      for (std::size_t d = 0; d < dim; ++d) acc.sums[best][d] += points[i][d];
      acc.counts[best] += 1;
    }
  });
  counters.distance_evaluations += static_cast<std::uint64_t>(n) * k;

  // Block-ordered reduction into the candidate accumulators.
  for (const BlockAccumulator& acc : blocks) {
    for (std::size_t c = 0; c < k; ++c) {
      Candidate& cand = state.centroids.candidates[c];
      for (std::size_t d = 0; d < dim; ++d) cand.acc_wgt_cent[d] += acc.sums[c][d];
      cand.acc_count += acc.counts[c];
    }
  }
  return update_step(state.centroids, metric);
}

ClusteringResult run_lloyd(std::span<const Point> points, const CandidateSet& initial,
                           const FilterConfig& config, unsigned workers) {
  const int k = initial.k();
  if (k == 0) throw std::invalid_argument("run_lloyd: k must be >= 1");
  if (static_cast<std::size_t>(k) > points.size()) {
    throw std::invalid_argument("run_lloyd: k exceeds the number of points");
  }
  if (config.max_iterations < 1) {
    throw std::invalid_argument("run_lloyd: max_iterations must be >= 1");
  }

  const auto start = Clock::now();
  ClusteringResult result;
  LloydState state{initial, {}};
  state.centroids.reset_accumulators();

  const auto iterate_start = Clock::now();
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    const std::uint64_t evals_before = result.metrics.counters.distance_evaluations;
    const double movement =
        lloyd_iterate(points, state, config.metric, workers, result.metrics.counters);
    result.metrics.distance_evaluations_per_iteration.push_back(
        result.metrics.counters.distance_evaluations - evals_before);
    ++result.iterations;
    if (movement <= config.epsilon) break;
  }
  result.metrics.add_phase(
      "iterate", std::chrono::duration<double>(Clock::now() - iterate_start).count());

  // Final assignments against the final centroids; not part of the
  // per-iteration counter contract.
  const auto resolve_start = Clock::now();
  result.assignments.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    result.assignments[i] = closest_candidate(points[i], state.centroids, config.metric);
  }
  result.metrics.resolve_distance_evaluations +=
      static_cast<std::uint64_t>(points.size()) * static_cast<std::uint64_t>(k);
  result.metrics.add_phase(
      "resolve", std::chrono::duration<double>(Clock::now() - resolve_start).count());

  result.centroids = state.centroids.positions();
  result.metrics.total_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

double within_cluster_sum_of_squares(std::span<const Point> points,
                                     std::span<const Point> centroids,
                                     std::span<const int> assignments) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    total += comparable_distance(points[i], centroids[assignments[i]], Metric::Euclidean);
  }
  return total;
}

}  // namespace kdkm
