#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kdkm/baseline.hpp"
#include "kdkm/filtering.hpp"
#include "kdkm/kdtree.hpp"
#include "kdkm/metrics.hpp"

namespace kdkm {

// Two-level clustering: split the dataset into `partitions` shards, cluster
// every shard with k candidates in parallel, merge the partitions*k
// centroids down to k, then refine on the glued tree.
struct TwoLevelConfig {
  int partitions = 4;
  int k = 8;
  FilterConfig filter_config;
  std::uint64_t rng_seed = 1;
  bool shuffle = false;
  int leaf_capacity = 1;
  unsigned workers = 4;
};

struct PartitionResult {
  std::vector<std::vector<Point>> shards;
  // Shard-local position -> original dataset index.
  std::vector<std::vector<std::size_t>> index_maps;
};

// Contiguous chunks of size floor/ceil(n/partitions) after an optional
// seeded shuffle; the remainder goes to the earlier shards.
PartitionResult partition(std::span<const Point> points, int partitions, bool shuffle,
                          std::uint64_t rng_seed);

struct Level1Result {
  // Per-shard runs; assignments are in shard-local order.
  std::vector<ClusteringResult> shard_results;
  // Per-shard trees whose leaves carry original-dataset indices, ready for
  // KdTree::combine.
  std::vector<KdTree> trees;
};

// Clusters every shard independently (tree build + seeded init + filtering)
// on up to config.workers threads. Shard i draws its initial centroids with
// seed rng_seed + i. Results do not depend on the worker count.
Level1Result cluster_level1(const PartitionResult& parts, const TwoLevelConfig& config);

// Converged centroids of one run with acc_count holding the cluster sizes,
// the shape merge_candidates consumes.
CandidateSet weighted_centroid_set(const ClusteringResult& result);

// Greedy nearest matching: shard 0's centroids anchor the groups; every
// other shard contributes its nearest unmatched centroid per anchor (ties by
// index). Each merged centroid is the count-weighted mean of its group.
CandidateSet merge_candidates(const std::vector<CandidateSet>& level1, Metric metric);

// Glues the shard trees and runs the filtering loop from the merged
// candidates. Assignments come back in original dataset order.
ClusteringResult refine_level2(std::vector<KdTree> trees, const CandidateSet& merged,
                               const TwoLevelConfig& config);

// partition -> cluster_level1 -> merge_candidates -> refine_level2, with
// per-phase wall times in the result metrics.
ClusteringResult run_two_level(std::span<const Point> points, const TwoLevelConfig& config);

}  // namespace kdkm
