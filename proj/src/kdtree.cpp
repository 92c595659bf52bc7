#include "kdkm/kdtree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace kdkm {

namespace {

struct BuildContext {
  std::span<const Point> points;
  std::span<const std::size_t> original_indices;  // empty means identity
  int leaf_capacity;
};

std::size_t original_index(const BuildContext& ctx, std::size_t local) {
  return ctx.original_indices.empty() ? local : ctx.original_indices[local];
}

std::unique_ptr<KdNode> build_node(const BuildContext& ctx, std::span<std::size_t> idx) {
  auto node = std::make_unique<KdNode>();
  const std::size_t dim = ctx.points[idx[0]].size();

  node->cell = BoundingBox{ctx.points[idx[0]], ctx.points[idx[0]]};
  for (std::size_t i : idx.subspan(1)) {
    const Point& p = ctx.points[i];
    for (std::size_t d = 0; d < dim; ++d) {
      node->cell.lo[d] = std::min(node->cell.lo[d], p[d]);
      node->cell.hi[d] = std::max(node->cell.hi[d], p[d]);
    }
  }
  node->count = static_cast<std::int64_t>(idx.size());

  int widest = 0;
  double extent = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double e = node->cell.hi[d] - node->cell.lo[d];
    if (e > extent) {
      extent = e;
      widest = static_cast<int>(d);
    }
  }

  // Zero extent on the widest dimension means all points are identical:
  // stop regardless of capacity.
  if (idx.size() <= static_cast<std::size_t>(ctx.leaf_capacity) || extent == 0.0) {
    node->uniform_leaf = extent == 0.0;
    node->points.reserve(idx.size());
    node->original_indices.reserve(idx.size());
    node->wgt_cent.assign(dim, 0.0);
    for (std::size_t i : idx) {
      node->points.push_back(ctx.points[i]);
      node->original_indices.push_back(original_index(ctx, i));
      for (std::size_t d = 0; d < dim; ++d) node->wgt_cent[d] += ctx.points[i][d];
    }
    return node;
  }

  // Order by (coordinate, index) so ties are broken the same way every run.
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double ca = ctx.points[a][static_cast<std::size_t>(widest)];
    const double cb = ctx.points[b][static_cast<std::size_t>(widest)];
    return ca < cb || (ca == cb && a < b);
  });
  const std::size_t mid = (idx.size() - 1) / 2;  // lower median
  node->split_dim = widest;
  node->split_val = ctx.points[idx[mid]][static_cast<std::size_t>(widest)];

  node->left = build_node(ctx, idx.first(mid + 1));
  node->right = build_node(ctx, idx.subspan(mid + 1));

  node->wgt_cent.assign(dim, 0.0);
  for (std::size_t d = 0; d < dim; ++d) {
    node->wgt_cent[d] = node->left->wgt_cent[d] + node->right->wgt_cent[d];
  }
  return node;
}

int node_depth(const KdNode& node) {
  if (node.is_leaf()) return 0;
  return 1 + std::max(node_depth(*node.left), node_depth(*node.right));
}

std::uint64_t node_bytes(const KdNode& node) {
  std::uint64_t bytes = sizeof(KdNode);
  bytes += 3 * node.cell.lo.size() * sizeof(double);  // cell lo/hi + wgt_cent
  for (const Point& p : node.points) bytes += p.size() * sizeof(double) + sizeof(Point);
  bytes += node.original_indices.size() * sizeof(std::size_t);
  if (!node.is_leaf()) bytes += node_bytes(*node.left) + node_bytes(*node.right);
  return bytes;
}

}  // namespace

KdTree KdTree::build(std::span<const Point> points, int leaf_capacity) {
  return build(points, leaf_capacity, {});
}

KdTree KdTree::build(std::span<const Point> points, int leaf_capacity,
                     std::span<const std::size_t> original_indices) {
  if (points.empty()) throw std::invalid_argument("KdTree::build: empty point collection");
  if (leaf_capacity < 1) throw std::invalid_argument("KdTree::build: leaf_capacity must be >= 1");
  if (!original_indices.empty() && original_indices.size() != points.size()) {
    throw std::invalid_argument("KdTree::build: index map size mismatch");
  }
  const std::size_t dim = points[0].size();
  if (dim == 0) throw std::invalid_argument("KdTree::build: zero-dimensional points");
  for (const Point& p : points) {
    if (p.size() != dim) throw std::invalid_argument("KdTree::build: mixed dimensionality");
  }

  std::vector<std::size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});

  KdTree tree;
  tree.n_points_ = points.size();
  tree.dim_ = dim;
  BuildContext ctx{points, original_indices, leaf_capacity};
  tree.root_ = build_node(ctx, idx);
  if (original_indices.empty()) {
    tree.index_bound_ = points.size();
  } else {
    tree.index_bound_ = 1 + *std::max_element(original_indices.begin(), original_indices.end());
  }
  return tree;
}

KdTree KdTree::combine(std::vector<KdTree> trees) {
  if (trees.size() < 2) throw std::invalid_argument("KdTree::combine: need at least two trees");
  const std::size_t dim = trees[0].dimensionality();
  for (const KdTree& t : trees) {
    if (t.dimensionality() != dim) {
      throw std::invalid_argument("KdTree::combine: dimensionality mismatch");
    }
    if (t.size() == 0 || !t.root_) {
      throw std::invalid_argument("KdTree::combine: all inputs must have count >= 1");
    }
  }

  KdTree out = std::move(trees[0]);
  for (std::size_t i = 1; i < trees.size(); ++i) {
    KdTree& next = trees[i];
    auto glue = std::make_unique<KdNode>();
    glue->cell.lo.resize(dim);
    glue->cell.hi.resize(dim);
    glue->wgt_cent.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      glue->cell.lo[d] = std::min(out.root_->cell.lo[d], next.root_->cell.lo[d]);
      glue->cell.hi[d] = std::max(out.root_->cell.hi[d], next.root_->cell.hi[d]);
      glue->wgt_cent[d] = out.root_->wgt_cent[d] + next.root_->wgt_cent[d];
    }
    glue->count = out.root_->count + next.root_->count;
    glue->left = std::move(out.root_);
    glue->right = std::move(next.root_);
    out.root_ = std::move(glue);
    out.n_points_ += next.n_points_;
    out.index_bound_ = std::max(out.index_bound_, next.index_bound_);
  }
  return out;
}

int KdTree::depth() const { return node_depth(*root_); }

std::uint64_t KdTree::memory_bytes_estimate() const { return node_bytes(*root_); }

}  // namespace kdkm
