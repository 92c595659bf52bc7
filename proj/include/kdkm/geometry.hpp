#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace kdkm {

// A data point is a fixed-length vector of coordinates. All points of one
// dataset share the same dimensionality.
using Point = std::vector<double>;

enum class Metric { Euclidean, Manhattan, Chebyshev };

Metric metric_from_string(const std::string& name);
const char* to_string(Metric metric);

// Distance between a and b under the given metric. Throws
// std::invalid_argument on dimension mismatch.
double distance(const Point& a, const Point& b, Metric metric);

// Monotone stand-in for distance() used in argmin comparisons: squared
// distance for Euclidean (skips the root), the plain distance otherwise.
double comparable_distance(const Point& a, const Point& b, Metric metric);

// Axis-aligned box with lo[i] <= hi[i] for all i.
struct BoundingBox {
  Point lo;
  Point hi;

  std::size_t dimensionality() const { return lo.size(); }
  bool contains(const Point& p) const;
  bool contains(const BoundingBox& other) const;
};

// Tightest box containing all points. Throws on an empty collection.
BoundingBox bbox_of(std::span<const Point> points);

Point midpoint(const BoundingBox& box);

// Vertex of the box extremal along direction: hi[i] where direction[i] > 0,
// lo[i] otherwise (ties take lo[i]).
Point extreme_vertex(const BoundingBox& box, const Point& direction);

// Smallest / largest distance from p to any point of the box.
double min_distance(const Point& p, const BoundingBox& box, Metric metric);
double max_distance(const Point& p, const BoundingBox& box, Metric metric);

}  // namespace kdkm
