#include <algorithm>

#include "polyapprox/errors.hpp"
#include "polyapprox/polytope.hpp"
#include "polyapprox/predicates.hpp"

namespace polyapprox {

// Andrew's monotone chain.
Polygon hull2d(std::span<const Vec2> points) {
  if (points.size() < 3) throw DegenerateHullError("hull2d: fewer than 3 points");
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(),
            [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) throw DegenerateHullError("hull2d: fewer than 3 distinct points");

  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && orient2d(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && orient2d(hull[k - 2], hull[k - 1], *it) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw DegenerateHullError("hull2d: all points collinear");
  return Polygon{std::move(hull)};
}

}  // namespace polyapprox
