#include "kdkm/twolevel.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

#include "kdkm/parallel.hpp"
#include "kdkm/rng.hpp"

namespace kdkm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

PartitionResult partition(std::span<const Point> points, int partitions, bool shuffle,
                          std::uint64_t rng_seed) {
  if (partitions < 1) throw std::invalid_argument("partition: partitions must be >= 1");
  const std::size_t n = points.size();
  if (n < static_cast<std::size_t>(partitions)) {
    throw std::invalid_argument("partition: fewer points than partitions");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (shuffle) {
    std::mt19937_64 rng(rng_seed);
    deterministic_shuffle(order, rng);
  }

  PartitionResult out;
  out.shards.resize(static_cast<std::size_t>(partitions));
  out.index_maps.resize(static_cast<std::size_t>(partitions));
  const std::size_t base = n / static_cast<std::size_t>(partitions);
  const std::size_t remainder = n % static_cast<std::size_t>(partitions);
  std::size_t cursor = 0;
  for (std::size_t s = 0; s < static_cast<std::size_t>(partitions); ++s) {
    const std::size_t size = base + (s < remainder ? 1 : 0);
    out.shards[s].reserve(size);
    out.index_maps[s].reserve(size);
    for (std::size_t i = 0; i < size; ++i, ++cursor) {
      out.shards[s].push_back(points[order[cursor]]);
      out.index_maps[s].push_back(order[cursor]);
    }
  }
  return out;
}

Level1Result cluster_level1(const PartitionResult& parts, const TwoLevelConfig& config) {
  const std::size_t n_shards = parts.shards.size();
  Level1Result out;
  out.shard_results.resize(n_shards);
  std::vector<std::optional<KdTree>> trees(n_shards);

  parallel_for(n_shards, config.workers, [&](std::size_t s) {
    try {
      const std::vector<Point>& shard = parts.shards[s];
      KdTree tree = KdTree::build(shard, config.leaf_capacity, parts.index_maps[s]);
      const CandidateSet initial =
          lloyd_init(shard, config.k, config.rng_seed + s);
      ClusteringResult result = run_filtering(tree, initial, config.filter_config);

      // run_filtering resolves by original index; compact to shard order.
      std::vector<int> local(shard.size());
      for (std::size_t i = 0; i < shard.size(); ++i) {
        local[i] = result.assignments[parts.index_maps[s][i]];
      }
      result.assignments = std::move(local);

      out.shard_results[s] = std::move(result);
      trees[s].emplace(std::move(tree));
    } catch (const std::exception& e) {
      throw std::invalid_argument("shard " + std::to_string(s) + ": " + e.what());
    }
  });

  out.trees.reserve(n_shards);
  for (std::optional<KdTree>& t : trees) out.trees.push_back(std::move(*t));
  return out;
}

CandidateSet weighted_centroid_set(const ClusteringResult& result) {
  CandidateSet set = CandidateSet::from_positions(result.centroids);
  for (int a : result.assignments) set.candidates[static_cast<std::size_t>(a)].acc_count += 1;
  return set;
}

CandidateSet merge_candidates(const std::vector<CandidateSet>& level1, Metric metric) {
  if (level1.empty()) throw std::invalid_argument("merge_candidates: no candidate sets");
  const std::size_t k = level1[0].candidates.size();
  for (const CandidateSet& set : level1) {
    if (set.candidates.size() != k) {
      throw std::invalid_argument("merge_candidates: candidate set size mismatch");
    }
  }
  if (level1.size() == 1) return level1[0];

  const std::size_t dim = level1[0].candidates[0].position.size();
  std::vector<std::vector<bool>> matched(level1.size(), std::vector<bool>(k, false));

  CandidateSet merged;
  merged.candidates.reserve(k);
  for (std::size_t a = 0; a < k; ++a) {
    const Point& anchor = level1[0].candidates[a].position;
    Point sum(dim, 0.0);
    std::int64_t total_weight = 0;
    Point unweighted(dim, 0.0);

    auto absorb = [&](const Candidate& c) {
      for (std::size_t d = 0; d < dim; ++d) {
        sum[d] += static_cast<double>(c.acc_count) * c.position[d];
        unweighted[d] += c.position[d];
      }
      total_weight += c.acc_count;
    };
    absorb(level1[0].candidates[a]);

    for (std::size_t s = 1; s < level1.size(); ++s) {
      std::size_t best = k;
      double best_d = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        if (matched[s][j]) continue;
        const double d = comparable_distance(anchor, level1[s].candidates[j].position, metric);
        if (best == k || d < best_d) {
          best = j;
          best_d = d;
        }
      }
      matched[s][best] = true;
      absorb(level1[s].candidates[best]);
    }

    Point position(dim);
    if (total_weight > 0) {
      for (std::size_t d = 0; d < dim; ++d) {
        position[d] = sum[d] / static_cast<double>(total_weight);
      }
    } else {
      // Every matched cluster came back empty; fall back to the plain mean.
      for (std::size_t d = 0; d < dim; ++d) {
        position[d] = unweighted[d] / static_cast<double>(level1.size());
      }
    }
    merged.candidates.push_back(
        Candidate{std::move(position), Point(dim, 0.0), total_weight, static_cast<int>(a)});
  }
  return merged;
}

ClusteringResult refine_level2(std::vector<KdTree> trees, const CandidateSet& merged,
                               const TwoLevelConfig& config) {
  if (trees.empty()) throw std::invalid_argument("refine_level2: no trees");
  KdTree top = trees.size() == 1 ? std::move(trees[0]) : KdTree::combine(std::move(trees));
  return run_filtering(top, merged, config.filter_config);
}

ClusteringResult run_two_level(std::span<const Point> points, const TwoLevelConfig& config) {
  if (config.partitions < 1 || config.k < 1) {
    throw std::invalid_argument("run_two_level: partitions and k must be >= 1");
  }
  const std::size_t budget =
      static_cast<std::size_t>(config.partitions) * static_cast<std::size_t>(config.k);
  if (budget > points.size()) {
    throw std::invalid_argument("run_two_level: partitions*k exceeds the number of points");
  }

  const auto start = Clock::now();

  auto phase_start = Clock::now();
  PartitionResult parts = partition(points, config.partitions, config.shuffle, config.rng_seed);
  const double partition_seconds = seconds_since(phase_start);

  phase_start = Clock::now();
  Level1Result level1 = cluster_level1(parts, config);
  const double level1_seconds = seconds_since(phase_start);

  phase_start = Clock::now();
  std::vector<CandidateSet> weighted;
  weighted.reserve(level1.shard_results.size());
  for (const ClusteringResult& r : level1.shard_results) {
    weighted.push_back(weighted_centroid_set(r));
  }
  const CandidateSet merged = merge_candidates(weighted, config.filter_config.metric);
  const double merge_seconds = seconds_since(phase_start);

  phase_start = Clock::now();
  ClusteringResult result = refine_level2(std::move(level1.trees), merged, config);
  const double level2_seconds = seconds_since(phase_start);

  result.iterations_level1.reserve(level1.shard_results.size());
  for (const ClusteringResult& r : level1.shard_results) {
    result.iterations_level1.push_back(r.iterations);
    result.metrics.counters.distance_evaluations += r.metrics.counters.distance_evaluations;
    result.metrics.counters.pruning_evaluations += r.metrics.counters.pruning_evaluations;
    result.metrics.counters.node_visits += r.metrics.counters.node_visits;
    result.metrics.resolve_distance_evaluations += r.metrics.resolve_distance_evaluations;
  }

  RunMetrics metrics;
  metrics.counters = result.metrics.counters;
  metrics.distance_evaluations_per_iteration =
      std::move(result.metrics.distance_evaluations_per_iteration);
  metrics.resolve_distance_evaluations = result.metrics.resolve_distance_evaluations;
  metrics.peak_tree_bytes_estimate = result.metrics.peak_tree_bytes_estimate;
  metrics.add_phase("partition", partition_seconds);
  metrics.add_phase("level1", level1_seconds);
  metrics.add_phase("merge", merge_seconds);
  metrics.add_phase("level2", level2_seconds);
  metrics.total_seconds = seconds_since(start);
  result.metrics = std::move(metrics);
  return result;
}

}  // namespace kdkm
