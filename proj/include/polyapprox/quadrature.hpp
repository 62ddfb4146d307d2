#pragma once

#include <functional>
#include <vector>

namespace polyapprox::quad {

/// Gauss-Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rule with n points; computed once per n and cached (thread safe).
const Rule& gauss_legendre(int n);

/// Adaptive composite Gauss-Legendre on [a, b]. Panels are bisected until the
/// one-panel and two-panel estimates agree to max(rel_tol * integral of |f|,
/// abs_tol), distributed over the interval by length. Refinement stops at a
/// fixed panel budget, so noisy integrands terminate.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-11, int initial_panels = 8, double abs_tol = 0.0);

/// Iterated adaptive integral over [ax, bx] x [ay, by]; f(x, y).
double integrate_2d(const std::function<double(double, double)>& f, double ax,
                    double bx, double ay, double by, double rel_tol = 1e-11,
                    int initial_panels = 8, double abs_tol = 0.0);

}  // namespace polyapprox::quad
