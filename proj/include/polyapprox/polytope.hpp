#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "polyapprox/bodies.hpp"
#include "polyapprox/geometry.hpp"

namespace polyapprox {

/// Strictly convex polygon, vertices counterclockwise.
struct Polygon {
  std::vector<Vec2> vertices;
};

/// Triangulated convex polyhedron with outward-oriented facets.
struct Polyhedron {
  struct Edge {
    int a = 0;
    int b = 0;
    int left = 0;   // facet containing the directed edge a -> b
    int right = 0;  // facet containing b -> a
  };

  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> facets;
  std::vector<Vec3> normals;  // unit outward normal per facet
  std::vector<Edge> edges;

  int euler_characteristic() const {
    return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) +
           static_cast<int>(facets.size());
  }
};

using Polytope = std::variant<Polygon, Polyhedron>;

/// Convex hull of planar points; interior and collinear boundary points are
/// dropped. Throws DegenerateHullError when all points are collinear.
Polygon hull2d(std::span<const Vec2> points);

/// Convex hull of spatial points. Visibility decisions use exact-sign
/// orientation tests, so the result is combinatorially consistent even for
/// nearly cospherical input. Throws DegenerateHullError for coplanar input.
Polyhedron hull3d(std::span<const Vec3> points);

/// Hull of boundary samples in the body's dimension (z ignored for d = 2).
Polytope hull_of(int dim, std::span<const Vec3> points);

struct IntrinsicReport {
  int dim = 2;
  double volume = 0.0;      // area for d = 2
  double surface = 0.0;     // perimeter for d = 2
  double mean_width = 0.0;
  std::array<double, 4> v{};  // v[j] = V_j, j = 1..dim

  double operator[](int j) const { return v.at(j); }
};

IntrinsicReport intrinsic_volumes(const Polygon& p);
/// Mean width from the edge formula w = (1/4pi) sum_e length(e) * theta(e),
/// theta the exterior dihedral angle.
IntrinsicReport intrinsic_volumes(const Polyhedron& p);
IntrinsicReport intrinsic_volumes(const Polytope& p);

enum class Side { inscribed, circumscribed };

const char* to_string(Side side);

struct DeviationReport {
  int j = 1;
  double value = 0.0;
  Side side = Side::inscribed;
};

/// The quantity a deviation index measures: j = d is volume, j = 1 is mean
/// width, j = 2 in d = 3 is V_2 (half the surface area).
double deviation_measure(const ConvexBody& body, int j);
double deviation_measure(const IntrinsicReport& report, int j);

/// Nested deviation: body minus polytope when inscribed, polytope minus body
/// when circumscribed. Throws GeometryError if the nesting precondition
/// fails (vertices off the boundary, or body not contained).
DeviationReport deviation(const ConvexBody& body, const Polytope& p, int j, Side side);

struct CircumscribeResult {
  enum class Status { bounded, unbounded };
  Status status = Status::unbounded;
  std::optional<Polytope> polytope;

  bool bounded() const { return status == Status::bounded; }
};

/// Intersection of the supporting halfspaces <x, u_i> <= h(u_i), built by
/// polarity: hull the points u_i / h(u_i), send each hull facet with plane
/// <x, v> = 1 to the vertex v, and hull those vertices. Unbounded
/// intersections (origin not strictly inside the dual hull) are reported as
/// Status::unbounded rather than thrown.
CircumscribeResult circumscribe(const ConvexBody& body, std::span<const Vec3> normals);

/// Writes ASCII OFF (planar polygons get z = 0 and a single face).
void write_off(std::ostream& os, const Polytope& p);

}  // namespace polyapprox
