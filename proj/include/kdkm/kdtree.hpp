#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "kdkm/geometry.hpp"

namespace kdkm {

// Node of the clustering kd-tree. Every node carries the bounding box of its
// own points (cells are tightened to the points, not split-inherited), the
// number of points underneath, and their coordinate-wise sum.
struct KdNode {
  BoundingBox cell;
  std::int64_t count = 0;
  Point wgt_cent;

  // Internal nodes have both children. split_dim is -1 on nodes synthesized
  // by KdTree::combine, which glue subtrees without an axis split.
  std::unique_ptr<KdNode> left;
  std::unique_ptr<KdNode> right;
  int split_dim = -1;
  double split_val = 0.0;

  // Leaf payload. uniform_leaf marks leaves whose stored points are all
  // identical; those may hold more than leaf_capacity points (the duplicate
  // rule stops recursion once splitting cannot separate anything).
  std::vector<Point> points;
  std::vector<std::size_t> original_indices;
  bool uniform_leaf = false;

  bool is_leaf() const { return left == nullptr; }
};

// Immutable after construction; safe for concurrent reads.
class KdTree {
 public:
  // Builds the tree by recursively splitting on the dimension with the
  // largest extent, at the lower median. Points strictly below the median
  // value go left; equal values are divided to keep the sides balanced
  // within one, so the depth stays logarithmic.
  static KdTree build(std::span<const Point> points, int leaf_capacity = 1);

  // As above, with explicit original indices for the stored points (used
  // when the input is a shard of a larger dataset).
  static KdTree build(std::span<const Point> points, int leaf_capacity,
                      std::span<const std::size_t> original_indices);

  // Glues the roots of the input trees under synthetic internal nodes whose
  // cell is the union box and whose count/wgt_cent are sums. No rebuild, no
  // axis-split property on the glue nodes. Consumes the inputs.
  static KdTree combine(std::vector<KdTree> trees);

  const KdNode& root() const { return *root_; }
  std::size_t size() const { return n_points_; }
  std::size_t dimensionality() const { return dim_; }
  // One past the largest original index stored in a leaf.
  std::size_t index_bound() const { return index_bound_; }

  // Longest root-to-leaf edge count.
  int depth() const;

  // Rough in-memory footprint of the node structure and payloads.
  std::uint64_t memory_bytes_estimate() const;

 private:
  KdTree() = default;

  std::unique_ptr<KdNode> root_;
  std::size_t n_points_ = 0;
  std::size_t dim_ = 0;
  std::size_t index_bound_ = 0;
};

}  // namespace kdkm
