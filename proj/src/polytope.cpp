#include "polyapprox/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "polyapprox/errors.hpp"
#include "polyapprox/predicates.hpp"

namespace polyapprox {

namespace {

constexpr double kFlatEdgeAngle = 1e-12;
constexpr double kBoundaryTolerance = 1e-9;

// d vol_d(B_d) / (2 vol_{d-1}(B_{d-1})): factor from mean width to V_1.
double mean_width_to_v1(int d) {
  return d * ball_volume(d) / (2.0 * ball_volume(d - 1));
}

}  // namespace

IntrinsicReport intrinsic_volumes(const Polygon& p) {
  IntrinsicReport r;
  r.dim = 2;
  const std::size_t n = p.vertices.size();
  double twice_area = 0.0;
  double perimeter = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = p.vertices[i];
    const Vec2 b = p.vertices[(i + 1) % n];
    twice_area += cross(a, b);
    perimeter += norm(b - a);
  }
  r.volume = 0.5 * twice_area;
  r.surface = perimeter;
  r.mean_width = perimeter / kPi;
  r.v[1] = 0.5 * perimeter;
  r.v[2] = r.volume;
  return r;
}

IntrinsicReport intrinsic_volumes(const Polyhedron& p) {
  IntrinsicReport r;
  r.dim = 3;
  double six_volume = 0.0;
  double twice_area = 0.0;
  for (const auto& f : p.facets) {
    const Vec3 a = p.vertices[f[0]];
    const Vec3 b = p.vertices[f[1]];
    const Vec3 c = p.vertices[f[2]];
    six_volume += dot(a, cross(b, c));
    twice_area += norm(cross(b - a, c - a));
  }
  double edge_sum = 0.0;
  for (const auto& e : p.edges) {
    const Vec3 n0 = p.normals[e.left];
    const Vec3 n1 = p.normals[e.right];
    // Exterior dihedral angle = angle between the outward normals.
    double theta = std::atan2(norm(cross(n0, n1)), dot(n0, n1));
    theta = std::clamp(theta, 0.0, kPi);
    if (theta < kFlatEdgeAngle) continue;
    edge_sum += norm(p.vertices[e.b] - p.vertices[e.a]) * theta;
  }
  r.volume = six_volume / 6.0;
  r.surface = 0.5 * twice_area;
  r.mean_width = edge_sum / (4.0 * kPi);
  r.v[1] = mean_width_to_v1(3) * r.mean_width;
  r.v[2] = 0.5 * r.surface;
  r.v[3] = r.volume;
  return r;
}

IntrinsicReport intrinsic_volumes(const Polytope& p) {
  return std::visit([](const auto& q) { return intrinsic_volumes(q); }, p);
}

const char* to_string(Side side) {
  return side == Side::inscribed ? "inscribed" : "circumscribed";
}

double deviation_measure(const ConvexBody& body, int j) {
  const int d = body.dimension();
  if (j < 1 || j > d) throw InputError("deviation index j outside 1..d");
  if (j == d) return body.volume();
  if (j == 1) return body.mean_width();
  return body.intrinsic_volume(j);
}

double deviation_measure(const IntrinsicReport& r, int j) {
  if (j < 1 || j > r.dim) throw InputError("deviation index j outside 1..d");
  if (j == r.dim) return r.volume;
  if (j == 1) return r.mean_width;
  return r.v[j];
}

namespace {

int dimension_of(const Polytope& p) { return std::holds_alternative<Polygon>(p) ? 2 : 3; }

void check_inscribed(const ConvexBody& body, const Polytope& p) {
  auto check = [&](Vec3 v) {
    const double g = body.gauge(v);
    if (!(std::abs(g - 1.0) <= kBoundaryTolerance)) {
      throw GeometryError("deviation: vertex off the boundary (gauge " + std::to_string(g) +
                          ")");
    }
  };
  if (const auto* poly = std::get_if<Polygon>(&p)) {
    for (Vec2 v : poly->vertices) check(lift(v));
  } else {
    for (Vec3 v : std::get<Polyhedron>(p).vertices) check(v);
  }
}

// K is inside Q iff h_K(n) <= offset for every facet (n, offset) of Q.
void check_circumscribed(const ConvexBody& body, const Polytope& p) {
  auto check = [&](Vec3 n, double offset) {
    const double h = body.support(n);
    if (!(h <= offset + kBoundaryTolerance * std::max(1.0, std::abs(offset)))) {
      throw GeometryError("deviation: body not contained in circumscribed polytope");
    }
  };
  if (const auto* poly = std::get_if<Polygon>(&p)) {
    const std::size_t n = poly->vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = poly->vertices[i];
      const Vec2 e = poly->vertices[(i + 1) % n] - a;
      const Vec2 nrm = (1.0 / norm(e)) * Vec2{e.y, -e.x};
      check(lift(nrm), dot(nrm, a));
    }
  } else {
    const auto& ph = std::get<Polyhedron>(p);
    for (std::size_t f = 0; f < ph.facets.size(); ++f) {
      check(ph.normals[f], dot(ph.normals[f], ph.vertices[ph.facets[f][0]]));
    }
  }
}

}  // namespace

DeviationReport deviation(const ConvexBody& body, const Polytope& p, int j, Side side) {
  if (dimension_of(p) != body.dimension()) {
    throw InputError("deviation: polytope and body dimensions differ");
  }
  if (side == Side::inscribed) {
    check_inscribed(body, p);
  } else {
    check_circumscribed(body, p);
  }
  const double ref = deviation_measure(body, j);
  const double val = deviation_measure(intrinsic_volumes(p), j);
  return {j, side == Side::inscribed ? ref - val : val - ref, side};
}

// ------------------------------------------------------------ circumscribe --

namespace {

CircumscribeResult unbounded() { return {CircumscribeResult::Status::unbounded, std::nullopt}; }

CircumscribeResult circumscribe_2d(const ConvexBody& body, std::span<const Vec3> normals) {
  std::vector<Vec2> dual;
  dual.reserve(normals.size());
  for (Vec3 u : normals) dual.push_back((1.0 / body.support(u)) * drop(u));
  Polygon hull;
  try {
    hull = hull2d(dual);
  } catch (const DegenerateHullError&) {
    return unbounded();
  }
  const std::size_t n = hull.vertices.size();
  std::vector<Vec2> verts;
  verts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = hull.vertices[i];
    const Vec2 b = hull.vertices[(i + 1) % n];
    if (orient2d(a, b, Vec2{0.0, 0.0}) <= 0) return unbounded();
    const Vec2 e = b - a;
    const Vec2 outward{e.y, -e.x};
    const double offset = dot(outward, a);
    if (!(offset > 1e-14 * norm(outward) * norm(a))) return unbounded();
    verts.push_back((1.0 / offset) * outward);
  }
  return {CircumscribeResult::Status::bounded, Polytope{hull2d(verts)}};
}

CircumscribeResult circumscribe_3d(const ConvexBody& body, std::span<const Vec3> normals) {
  std::vector<Vec3> dual;
  dual.reserve(normals.size());
  for (Vec3 u : normals) dual.push_back((1.0 / body.support(u)) * u);
  Polyhedron hull;
  try {
    hull = hull3d(dual);
  } catch (const DegenerateHullError&) {
    return unbounded();
  }
  std::vector<Vec3> verts;
  verts.reserve(hull.facets.size());
  const Vec3 origin{0.0, 0.0, 0.0};
  for (const auto& f : hull.facets) {
    const Vec3 a = hull.vertices[f[0]];
    const Vec3 b = hull.vertices[f[1]];
    const Vec3 c = hull.vertices[f[2]];
    if (orient3d(a, b, c, origin) >= 0) return unbounded();
    const Vec3 nrm = cross(b - a, c - a);
    const double offset = dot(nrm, a);
    if (!(offset > 1e-14 * norm(nrm) * norm(a))) return unbounded();
    verts.push_back((1.0 / offset) * nrm);
  }
  // Coplanar dual facets map to the same vertex; merge near-duplicates.
  std::sort(verts.begin(), verts.end(), [](Vec3 p, Vec3 q) {
    return p.x < q.x || (p.x == q.x && (p.y < q.y || (p.y == q.y && p.z < q.z)));
  });
  std::vector<Vec3> unique;
  for (Vec3 v : verts) {
    bool dup = false;
    for (auto it = unique.rbegin(); it != unique.rend(); ++it) {
      if (v.x - it->x > 1e-12 * (1.0 + std::abs(v.x))) break;
      if (norm(v - *it) <= 1e-12 * (1.0 + norm(v))) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(v);
  }
  try {
    return {CircumscribeResult::Status::bounded, Polytope{hull3d(unique)}};
  } catch (const DegenerateHullError&) {
    return unbounded();
  }
}

}  // namespace

CircumscribeResult circumscribe(const ConvexBody& body, std::span<const Vec3> normals) {
  if (body.dimension() == 2) return circumscribe_2d(body, normals);
  return circumscribe_3d(body, normals);
}

void write_off(std::ostream& os, const Polytope& p) {
  os.precision(17);
  if (const auto* poly = std::get_if<Polygon>(&p)) {
    const std::size_t n = poly->vertices.size();
    os << "OFF\n" << n << " 1 0\n";
    for (Vec2 v : poly->vertices) os << v.x << ' ' << v.y << " 0\n";
    os << n;
    for (std::size_t i = 0; i < n; ++i) os << ' ' << i;
    os << '\n';
    return;
  }
  const auto& ph = std::get<Polyhedron>(p);
  os << "OFF\n" << ph.vertices.size() << ' ' << ph.facets.size() << ' ' << ph.edges.size()
     << '\n';
  for (Vec3 v : ph.vertices) os << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const auto& f : ph.facets) os << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

}  // namespace polyapprox
