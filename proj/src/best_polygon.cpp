#include <algorithm>
#include <cmath>
#include <limits>

#include "polyapprox/errors.hpp"
#include "polyapprox/experiments.hpp"
#include "polyapprox/quadrature.hpp"

namespace polyapprox {

Objective parse_objective(const std::string& text) {
  if (text == "area") return Objective::area;
  if (text == "perimeter") return Objective::perimeter;
  throw InputError("objective must be 'area' or 'perimeter' (got '" + text + "')");
}

namespace {

struct AnchorRun {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<int> chain;  // offsets from the anchor, increasing
};

// Best chain q_0 = anchor, q_{k_1}, ..., q_{k_{N-1}} with 0 < k_1 < ... < G.
// Area is accumulated as the fan of triangles (q_0, q_prev, q_k); the
// perimeter objective adds edge lengths plus the closing edge.
AnchorRun run_anchor(const std::vector<Vec2>& grid, int anchor, int n, Objective objective) {
  const int g = static_cast<int>(grid.size());
  std::vector<Vec2> r(g);
  for (int k = 0; k < g; ++k) r[k] = grid[(anchor + k) % g] - grid[anchor];
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  std::vector<double> prev(g, kNone), cur(g, kNone);
  std::vector<int> parent(static_cast<std::size_t>(n) * g, -1);
  prev[0] = 0.0;
  for (int c = 1; c < n; ++c) {
    std::fill(cur.begin(), cur.end(), kNone);
    // Leave room for the remaining n - 1 - c vertices.
    const int last = g - (n - 1 - c);
    for (int k = c; k < last; ++k) {
      double best = kNone;
      int arg = -1;
      for (int kp = c - 1; kp < k; ++kp) {
        if (prev[kp] == kNone) continue;
        const double gain = objective == Objective::area ? 0.5 * cross(r[kp], r[k])
                                                         : norm(r[k] - r[kp]);
        const double v = prev[kp] + gain;
        if (v > best) {
          best = v;
          arg = kp;
        }
      }
      cur[k] = best;
      parent[static_cast<std::size_t>(c) * g + k] = arg;
    }
    prev.swap(cur);
  }
  AnchorRun run;
  int end = -1;
  for (int k = n - 1; k < g; ++k) {
    if (prev[k] == kNone) continue;
    const double v = prev[k] + (objective == Objective::area ? 0.0 : norm(r[k]));
    if (v > run.value) {
      run.value = v;
      end = k;
    }
  }
  run.chain.resize(n);
  for (int c = n - 1, k = end; c >= 0; --c) {
    run.chain[c] = k;
    k = c > 0 ? parent[static_cast<std::size_t>(c) * g + k] : k;
  }
  return run;
}

}  // namespace

BestPolygon best_polygon_dp(const BodyPtr& body, int n, int grid, Objective objective,
                            int starts) {
  if (body->dimension() != 2) throw InputError("best_polygon_dp needs a planar body");
  if (n < 3) throw InputError("best_polygon_dp: N must be at least 3");
  if (grid < 8 * n) {
    throw InputError("best_polygon_dp: grid G = " + std::to_string(grid) +
                     " is below the resolution floor 8N = " + std::to_string(8 * n));
  }
  if (starts < 8) throw InputError("best_polygon_dp: at least 8 anchors required");
  starts = std::min(starts, grid);

  const double period = body->parameter_extent().t;
  std::vector<Vec2> pts(grid);
  for (int i = 0; i < grid; ++i) pts[i] = drop(body->boundary({period * i / grid, 0.0}).position);

  std::vector<AnchorRun> runs(starts);
#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < starts; ++s) {
    const int anchor = static_cast<int>(static_cast<long>(s) * grid / starts);
    runs[s] = run_anchor(pts, anchor, n, objective);
  }
  int best = 0;
  for (int s = 1; s < starts; ++s) {
    if (runs[s].value > runs[best].value) best = s;
  }

  BestPolygon out;
  out.anchor = static_cast<int>(static_cast<long>(best) * grid / starts);
  out.objective = runs[best].value;
  for (int k : runs[best].chain) {
    const int idx = (out.anchor + k) % grid;
    out.grid_index.push_back(idx);
    out.polygon.vertices.push_back(pts[idx]);
  }
  const int j = objective == Objective::area ? 2 : 1;
  out.deviation = deviation(*body, out.polygon, j, Side::inscribed).value;

  const ArclengthBins bins(*body);
  out.histogram.assign(kHistogramBins, 0.0);
  for (int idx : out.grid_index) {
    out.histogram[bins.bin_of(period * idx / grid)] += 1.0 / n;
  }
  return out;
}

// -------------------------------------------------------------- histogram --

ArclengthBins::ArclengthBins(const ConvexBody& body, int bins) : body_(body), bins_(bins) {
  if (body.dimension() != 2) throw InputError("arclength bins need a planar body");
  const double period = body.parameter_extent().t;
  length_ = body.surface_measure();
  edges_.resize(bins + 1);
  edges_[0] = 0.0;
  edges_[bins] = period;
  for (int b = 1; b < bins; ++b) {
    const double target = length_ * b / bins;
    double lo = edges_[b - 1];
    double hi = period;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * period; ++it) {
      const double mid = 0.5 * (lo + hi);
      (arclength(mid) < target ? lo : hi) = mid;
    }
    edges_[b] = 0.5 * (lo + hi);
  }
}

double ArclengthBins::arclength(double theta) const {
  return quad::integrate(
      [&](double t) { return body_.boundary({t, 0.0}).area_element; }, 0.0, theta, 1e-13);
}

int ArclengthBins::bin_of(double theta) const {
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), theta);
  const int b = static_cast<int>(it - edges_.begin()) - 1;
  return std::clamp(b, 0, bins_ - 1);
}

std::vector<double> ArclengthBins::masses(const DensitySpec& density) const {
  std::vector<double> m(bins_);
  for (int b = 0; b < bins_; ++b) {
    m[b] = quad::integrate(
        [&](double t) {
          const BoundaryPoint bp = body_.boundary({t, 0.0});
          return density(bp) * bp.area_element;
        },
        edges_[b], edges_[b + 1], 1e-12);
  }
  return m;
}

double histogram_tv(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InputError("histogram_tv: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

}  // namespace polyapprox
