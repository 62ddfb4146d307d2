#include "polyapprox/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "polyapprox/geometry.hpp"

namespace polyapprox::quad {

namespace {

Rule build_rule(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

constexpr int kOrder = 10;
constexpr int kMaxDepth = 48;
constexpr long kPanelBudget = 1 << 20;

double panel(const std::function<double(double)>& f, double a, double b) {
  static const Rule& r = gauss_legendre(kOrder);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < kOrder; ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
  return s * half;
}

double refine(const std::function<double(double)>& f, double a, double b,
              double whole, double tol_density, int depth, long& budget) {
  const double m = 0.5 * (a + b);
  const double left = panel(f, a, m);
  const double right = panel(f, m, b);
  budget -= 2;
  const double halves = left + right;
  if (std::abs(halves - whole) <= tol_density * (b - a) || depth >= kMaxDepth ||
      budget <= 0) {
    return halves;
  }
  return refine(f, a, m, left, tol_density, depth + 1, budget) +
         refine(f, m, b, right, tol_density, depth + 1, budget);
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, int initial_panels, double abs_tol) {
  if (a == b) return 0.0;
  const double h = (b - a) / initial_panels;
  std::vector<double> coarse(initial_panels);
  double total = 0.0;
  double total_abs = 0.0;
  for (int i = 0; i < initial_panels; ++i) {
    coarse[i] = panel(f, a + i * h, a + (i + 1) * h);
    total += coarse[i];
    total_abs += std::abs(coarse[i]);
  }
  // Tolerance is relative to the integral of |f| so cancelling integrands
  // still terminate; clamp away from zero for identically vanishing f.
  const double scale = std::max(total_abs, 1e-300);
  const double tol_density = std::max(rel_tol * scale, abs_tol) / std::abs(b - a);
  long budget = kPanelBudget;
  double result = 0.0;
  for (int i = 0; i < initial_panels; ++i) {
    result += refine(f, a + i * h, a + (i + 1) * h, coarse[i], tol_density, 0, budget);
  }
  return result;
}

double integrate_2d(const std::function<double(double, double)>& f, double ax,
                    double bx, double ay, double by, double rel_tol,
                    int initial_panels, double abs_tol) {
  const double inner_abs = abs_tol / std::abs(bx - ax);
  auto inner = [&](double x) {
    return integrate([&](double y) { return f(x, y); }, ay, by, rel_tol,
                     initial_panels, inner_abs);
  };
  return integrate(inner, ax, bx, rel_tol, initial_panels, abs_tol);
}

}  // namespace polyapprox::quad
