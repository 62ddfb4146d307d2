#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "polyapprox/errors.hpp"
#include "polyapprox/polytope.hpp"
#include "polyapprox/predicates.hpp"

namespace polyapprox {

namespace {

// Quickhull-style incremental construction. Each unprocessed point sits in
// the outside set of one facet it sees; the furthest point of a facet is
// inserted next, and orphaned points are redistributed over the new cone.
class HullBuilder {
 public:
  explicit HullBuilder(std::span<const Vec3> pts) : pts_(pts) {}

  Polyhedron run() {
    const std::array<int, 4> simplex = initial_simplex();
    seed(simplex);
    while (!pending_.empty()) {
      const int f = pending_.back();
      pending_.pop_back();
      if (!faces_[f].alive || faces_[f].outside.empty()) continue;
      insert(furthest(f), f);
    }
    return extract();
  }

 private:
  struct Face {
    std::array<int, 3> v{};
    std::array<int, 3> nb{-1, -1, -1};  // neighbor across edge v[i] -> v[i+1]
    Vec3 normal;                          // unnormalized, for distance ranking
    bool alive = true;
    std::vector<int> outside;
  };

  bool sees(const Face& f, int p) const {
    return orient3d(pts_[f.v[0]], pts_[f.v[1]], pts_[f.v[2]], pts_[p]) > 0;
  }

  double height(const Face& f, int p) const {
    return dot(f.normal, pts_[p] - pts_[f.v[0]]);
  }

  int add_face(int a, int b, int c) {
    Face f;
    f.v = {a, b, c};
    f.normal = cross(pts_[b] - pts_[a], pts_[c] - pts_[a]);
    faces_.push_back(std::move(f));
    return static_cast<int>(faces_.size()) - 1;
  }

  std::array<int, 4> initial_simplex() const {
    const int n = static_cast<int>(pts_.size());
    if (n < 4) throw DegenerateHullError("hull3d: fewer than 4 points");
    int i0 = 0;
    for (int i = 1; i < n; ++i) {
      const Vec3 p = pts_[i];
      const Vec3 q = pts_[i0];
      if (p.x < q.x || (p.x == q.x && (p.y < q.y || (p.y == q.y && p.z < q.z)))) i0 = i;
    }
    int i1 = -1;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = norm(pts_[i] - pts_[i0]);
      if (d > best) {
        best = d;
        i1 = i;
      }
    }
    if (i1 < 0) throw DegenerateHullError("hull3d: all points coincide");
    int i2 = -1;
    best = 0.0;
    const Vec3 axis = pts_[i1] - pts_[i0];
    for (int i = 0; i < n; ++i) {
      const double d = norm(cross(axis, pts_[i] - pts_[i0]));
      if (d > best) {
        best = d;
        i2 = i;
      }
    }
    if (i2 < 0) throw DegenerateHullError("hull3d: all points collinear");
    const Vec3 nrm = cross(axis, pts_[i2] - pts_[i0]);
    int i3 = -1;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double d = std::abs(dot(nrm, pts_[i] - pts_[i0]));
      if (d > best) {
        best = d;
        i3 = i;
      }
    }
    if (orient3d(pts_[i0], pts_[i1], pts_[i2], pts_[i3]) == 0) {
      i3 = -1;
      for (int i = 0; i < n && i3 < 0; ++i) {
        if (orient3d(pts_[i0], pts_[i1], pts_[i2], pts_[i]) != 0) i3 = i;
      }
      if (i3 < 0) throw DegenerateHullError("hull3d: all points coplanar");
    }
    return {i0, i1, i2, i3};
  }

  void link(const std::vector<int>& ids) {
    std::unordered_map<long long, std::pair<int, int>> edge;
    auto key = [](int a, int b) { return (static_cast<long long>(a) << 32) | unsigned(b); };
    for (int f : ids) {
      for (int i = 0; i < 3; ++i) edge[key(faces_[f].v[i], faces_[f].v[(i + 1) % 3])] = {f, i};
    }
    for (int f : ids) {
      for (int i = 0; i < 3; ++i) {
        auto it = edge.find(key(faces_[f].v[(i + 1) % 3], faces_[f].v[i]));
        faces_[f].nb[i] = it->second.first;
      }
    }
  }

  void seed(const std::array<int, 4>& s) {
    std::array<int, 4> v = s;
    // Make v3 lie below face (v0, v1, v2).
    if (orient3d(pts_[v[0]], pts_[v[1]], pts_[v[2]], pts_[v[3]]) > 0) std::swap(v[1], v[2]);
    std::vector<int> ids = {add_face(v[0], v[1], v[2]), add_face(v[0], v[3], v[1]),
                            add_face(v[1], v[3], v[2]), add_face(v[2], v[3], v[0])};
    link(ids);
    const int n = static_cast<int>(pts_.size());
    for (int p = 0; p < n; ++p) {
      if (p == v[0] || p == v[1] || p == v[2] || p == v[3]) continue;
      for (int f : ids) {
        if (sees(faces_[f], p)) {
          faces_[f].outside.push_back(p);
          break;
        }
      }
    }
    for (int f : ids) {
      if (!faces_[f].outside.empty()) pending_.push_back(f);
    }
  }

  int furthest(int f) const {
    const Face& face = faces_[f];
    int best = face.outside.front();
    double best_h = height(face, best);
    for (int p : face.outside) {
      const double h = height(face, p);
      if (h > best_h) {
        best_h = h;
        best = p;
      }
    }
    return best;
  }

  void insert(int p, int start) {
    // Visible region by flood fill from the starting facet.
    std::vector<int> visible{start};
    faces_[start].alive = false;
    std::vector<std::pair<int, int>> horizon;  // (visible face, edge index)
    for (std::size_t k = 0; k < visible.size(); ++k) {
      const int f = visible[k];
      for (int i = 0; i < 3; ++i) {
        const int g = faces_[f].nb[i];
        if (!faces_[g].alive) continue;  // already in the visible set
        if (sees(faces_[g], p)) {
          faces_[g].alive = false;
          visible.push_back(g);
        } else {
          horizon.emplace_back(f, i);
        }
      }
    }
    // A visible face reached twice would be marked dead already, so dead
    // neighbors are exactly the visible ones; the horizon list is complete.

    std::unordered_map<int, int> by_start;
    std::unordered_map<int, int> by_end;
    std::vector<int> cone;
    cone.reserve(horizon.size());
    for (auto [f, i] : horizon) {
      const int a = faces_[f].v[i];
      const int b = faces_[f].v[(i + 1) % 3];
      const int other = faces_[f].nb[i];
      const int nf = add_face(a, b, p);
      faces_[nf].nb[0] = other;
      Face& o = faces_[other];
      for (int e = 0; e < 3; ++e) {
        if (o.v[e] == b && o.v[(e + 1) % 3] == a) o.nb[e] = nf;
      }
      by_start[a] = nf;
      by_end[b] = nf;
      cone.push_back(nf);
    }
    for (int nf : cone) {
      Face& f = faces_[nf];
      const int a = f.v[0];
      const int b = f.v[1];
      f.nb[1] = by_start.at(b);  // edge b -> p is shared with the face starting at b
      f.nb[2] = by_end.at(a);    // edge p -> a is shared with the face ending at a
    }

    for (int f : visible) {
      for (int q : faces_[f].outside) {
        if (q == p) continue;
        for (int nf : cone) {
          if (sees(faces_[nf], q)) {
            faces_[nf].outside.push_back(q);
            break;
          }
        }
      }
      faces_[f].outside.clear();
      faces_[f].outside.shrink_to_fit();
    }
    for (int nf : cone) {
      if (!faces_[nf].outside.empty()) pending_.push_back(nf);
    }
  }

  Polyhedron extract() const {
    Polyhedron out;
    std::vector<int> remap(pts_.size(), -1);
    std::vector<int> face_index(faces_.size(), -1);
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (!faces_[f].alive) continue;
      face_index[f] = static_cast<int>(out.facets.size());
      std::array<int, 3> tri{};
      for (int i = 0; i < 3; ++i) {
        const int v = faces_[f].v[i];
        if (remap[v] < 0) {
          remap[v] = static_cast<int>(out.vertices.size());
          out.vertices.push_back(pts_[v]);
        }
        tri[i] = remap[v];
      }
      out.facets.push_back(tri);
      out.normals.push_back(normalized(faces_[f].normal));
    }
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (!faces_[f].alive) continue;
      for (int i = 0; i < 3; ++i) {
        const int a = faces_[f].v[i];
        const int b = faces_[f].v[(i + 1) % 3];
        if (a < b) {
          out.edges.push_back({remap[a], remap[b], face_index[f], face_index[faces_[f].nb[i]]});
        }
      }
    }
    return out;
  }

  std::span<const Vec3> pts_;
  std::vector<Face> faces_;
  std::vector<int> pending_;
};

}  // namespace

Polyhedron hull3d(std::span<const Vec3> points) { return HullBuilder(points).run(); }

Polytope hull_of(int dim, std::span<const Vec3> points) {
  if (dim == 3) return hull3d(points);
  std::vector<Vec2> flat;
  flat.reserve(points.size());
  for (const Vec3& p : points) flat.push_back(drop(p));
  return hull2d(flat);
}

}  // namespace polyapprox
