#include "kdkm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kdkm {

namespace {

void require_same_dim(const Point& a, const Point& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  }
}

}  // namespace

Metric metric_from_string(const std::string& name) {
  if (name == "euclidean") return Metric::Euclidean;
  if (name == "manhattan") return Metric::Manhattan;
  if (name == "chebyshev") return Metric::Chebyshev;
  throw std::invalid_argument("unknown metric: " + name);
}

const char* to_string(Metric metric) {
  switch (metric) {
    case Metric::Euclidean: return "euclidean";
    case Metric::Manhattan: return "manhattan";
    case Metric::Chebyshev: return "chebyshev";
  }
  return "?";
}

double distance(const Point& a, const Point& b, Metric metric) {
  require_same_dim(a, b);
  switch (metric) {
    case Metric::Euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case Metric::Manhattan: {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
      return s;
    }
    case Metric::Chebyshev: {
      double m = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
      return m;
    }
  }
  return 0.0;
}

double comparable_distance(const Point& a, const Point& b, Metric metric) {
  if (metric != Metric::Euclidean) return distance(a, b, metric);
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

bool BoundingBox::contains(const Point& p) const {
  if (p.size() != lo.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  }
  return true;
}

bool BoundingBox::contains(const BoundingBox& other) const {
  if (other.lo.size() != lo.size()) return false;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (other.lo[i] < lo[i] || other.hi[i] > hi[i]) return false;
  }
  return true;
}

BoundingBox bbox_of(std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("bbox_of: empty point collection");
  BoundingBox box{points[0], points[0]};
  for (const Point& p : points.subspan(1)) {
    require_same_dim(box.lo, p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      box.lo[i] = std::min(box.lo[i], p[i]);
      box.hi[i] = std::max(box.hi[i], p[i]);
    }
  }
  return box;
}

Point midpoint(const BoundingBox& box) {
  Point mid(box.lo.size());
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = (box.lo[i] + box.hi[i]) / 2.0;
  return mid;
}

Point extreme_vertex(const BoundingBox& box, const Point& direction) {
  require_same_dim(box.lo, direction);
  Point v(direction.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = direction[i] > 0.0 ? box.hi[i] : box.lo[i];
  }
  return v;
}

double min_distance(const Point& p, const BoundingBox& box, Metric metric) {
  require_same_dim(p, box.lo);
  switch (metric) {
    case Metric::Euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double e = std::max({box.lo[i] - p[i], 0.0, p[i] - box.hi[i]});
        s += e * e;
      }
      return std::sqrt(s);
    }
    case Metric::Manhattan: {
      double s = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        s += std::max({box.lo[i] - p[i], 0.0, p[i] - box.hi[i]});
      }
      return s;
    }
    case Metric::Chebyshev: {
      double m = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        m = std::max(m, std::max({box.lo[i] - p[i], 0.0, p[i] - box.hi[i]}));
      }
      return m;
    }
  }
  return 0.0;
}

double max_distance(const Point& p, const BoundingBox& box, Metric metric) {
  require_same_dim(p, box.lo);
  switch (metric) {
    case Metric::Euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double f = std::max(std::abs(p[i] - box.lo[i]), std::abs(box.hi[i] - p[i]));
        s += f * f;
      }
      return std::sqrt(s);
    }
    case Metric::Manhattan: {
      double s = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        s += std::max(std::abs(p[i] - box.lo[i]), std::abs(box.hi[i] - p[i]));
      }
      return s;
    }
    case Metric::Chebyshev: {
      double m = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        m = std::max(m, std::max(std::abs(p[i] - box.lo[i]), std::abs(box.hi[i] - p[i])));
      }
      return m;
    }
  }
  return 0.0;
}

}  // namespace kdkm
