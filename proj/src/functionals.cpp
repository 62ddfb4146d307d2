#include "polyapprox/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polyapprox/errors.hpp"
#include "polyapprox/quadrature.hpp"

namespace polyapprox {

QuantFunctional::QuantFunctional(BodyPtr body, Weight kind, int j, double kp, int m,
                                 double hp)
    : body_(std::move(body)), kind_(kind), j_(j), kappa_power_(kp), h_index_(m),
      h_power_(hp) {}

QuantFunctional QuantFunctional::volume(BodyPtr body) {
  const double d = body->dimension();
  const int dim = body->dimension();
  return {std::move(body), Weight::volume, dim, 1.0 / (d - 1.0), 0, 0.0};
}

QuantFunctional QuantFunctional::mean_width(BodyPtr body) {
  const double d = body->dimension();
  return {std::move(body), Weight::mean_width, 1, d / (d - 1.0), 0, 0.0};
}

QuantFunctional QuantFunctional::intrinsic(BodyPtr body, int j) {
  const int d = body->dimension();
  if (j < 1 || j > d) {
    throw InputError("intrinsic functional: j = " + std::to_string(j) + " outside 1.." +
                     std::to_string(d));
  }
  return {std::move(body), Weight::intrinsic, j, 1.0 / (d - 1.0), d - j, 1.0};
}

double QuantFunctional::exponent() const { return 2.0 / (body_->dimension() - 1.0); }

double QuantFunctional::weight(const BoundaryPoint& bp) const {
  double w = std::pow(bp.kappa, kappa_power_);
  if (h_index_ != 0) w *= std::pow(bp.symmetric_curvature(h_index_), h_power_);
  return w;
}

std::string QuantFunctional::label() const {
  switch (kind_) {
    case Weight::volume:
      return "volume";
    case Weight::mean_width:
      return "meanwidth";
    case Weight::intrinsic:
      return "intrinsic:j=" + std::to_string(j_);
  }
  return "?";
}

double eval_quant(const QuantFunctional& fn, const DensitySpec& density) {
  const double a = fn.exponent();
  const double v = integrate_boundary(
      fn.body(),
      [&](const BoundaryPoint& bp) { return fn.weight(bp) * std::pow(density(bp), -a); },
      1e-12);
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw NumericalFailure("eval_quant: functional " + fn.label() + " diverges for " +
                           density.label);
  }
  return v;
}

double holder_bound(const QuantFunctional& fn) {
  const double q = 1.0 / (fn.exponent() + 1.0);
  const double s = integrate_boundary(
      fn.body(), [&](const BoundaryPoint& bp) { return std::pow(fn.weight(bp), q); }, 1e-12);
  return std::pow(s, fn.exponent() + 1.0);
}

DensitySpec holder_optimal(const QuantFunctional& fn) {
  const double q = 1.0 / (fn.exponent() + 1.0);
  return make_density(fn.body(), fn.kappa_power() * q, fn.h_index(), fn.h_power() * q,
                      "holder:" + fn.label());
}

// ------------------------------------------------------------- discrete --

QuantGrid make_quant_grid(const QuantFunctional& fn, int grid_size) {
  if (grid_size < 64) throw InputError("minimize_numeric: grid_size must be >= 64");
  const ConvexBody& body = fn.body();
  const Parameter ext = body.parameter_extent();
  QuantGrid g;
  auto add = [&](Parameter p, double cell) {
    BoundaryPoint bp = body.boundary(p);
    g.measure.push_back(cell * bp.area_element);
    g.weight.push_back(fn.weight(bp));
    g.points.push_back(bp);
  };
  if (body.dimension() == 2) {
    const double h = ext.t / grid_size;
    for (int i = 0; i < grid_size; ++i) add({(i + 0.5) * h, 0.0}, h);
    return g;
  }
  // Gauss-Legendre in phi resolves the sin(phi) factor far better than
  // midpoints; the lambda direction is periodic, where midpoints are spectral.
  const int n_phi = std::max(2, static_cast<int>(std::floor(std::sqrt(grid_size / 2.0))));
  const int n_lam = grid_size / n_phi;
  const auto& rule = quad::gauss_legendre(n_phi);
  const double half = 0.5 * ext.t;
  const double dl = ext.s / n_lam;
  for (int i = 0; i < n_phi; ++i) {
    const double phi = half * (rule.nodes[i] + 1.0);
    for (int k = 0; k < n_lam; ++k) add({phi, (k + 0.5) * dl}, half * rule.weights[i] * dl);
  }
  return g;
}

double discrete_value(const QuantGrid& grid, double a, std::span<const double> density) {
  double v = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    v += grid.weight[i] * grid.measure[i] * std::pow(density[i], -a);
  }
  return v;
}

DiscreteMinimum minimize_numeric(const QuantFunctional& fn, int grid_size,
                                 std::optional<std::vector<double>> start) {
  DiscreteMinimum out;
  out.grid = make_quant_grid(fn, grid_size);
  const auto& m = out.grid.measure;
  const std::size_t n = m.size();
  const double a = fn.exponent();
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = out.grid.weight[i] * m[i];

  std::vector<double> f(n);
  if (start) {
    if (start->size() != n) throw InputError("minimize_numeric: start has wrong size");
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!((*start)[i] > 0.0)) throw InputError("minimize_numeric: start must be positive");
      mass += (*start)[i] * m[i];
    }
    for (std::size_t i = 0; i < n; ++i) f[i] = (*start)[i] / mass;
  } else {
    const double total = std::accumulate(m.begin(), m.end(), 0.0);
    std::fill(f.begin(), f.end(), 1.0 / total);
  }
  const double mm = std::inner_product(m.begin(), m.end(), m.begin(), 0.0);

  std::vector<double> grad(n), step(n), trial(n);
  double value = discrete_value(out.grid, a, f);
  constexpr int kMaxIter = 100000;
  constexpr double kTol = 1e-10;
  constexpr double kStepFloor = 1e-16;
  for (int it = 0; it < kMaxIter; ++it) {
    // Projected gradient: remove the component along the constraint normal.
    double gm = 0.0;
    double gg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = -a * c[i] * std::pow(f[i], -a - 1.0);
      gm += grad[i] * m[i];
      gg += grad[i] * grad[i];
    }
    double pp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = grad[i] - gm / mm * m[i];
      pp += p * p;
    }
    out.projected_gradient = std::sqrt(pp / gg);
    if (out.projected_gradient < kTol) {
      out.density = std::move(f);
      out.value = value;
      out.iterations = it;
      return out;
    }
    // Scale by the inverse Hessian diagonal, then project in that metric so
    // the step keeps sum f_i m_i fixed.
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double hinv = f[i] * f[i] / (a * (a + 1.0) * c[i] * std::pow(f[i], -a));
      num += m[i] * grad[i] * hinv;
      den += m[i] * m[i] * hinv;
      step[i] = hinv;
    }
    const double lambda = num / den;
    double slope = 0.0;
    double t = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      step[i] = -(grad[i] - lambda * m[i]) * step[i];
      slope += grad[i] * step[i];
      // Fraction-to-boundary rule keeps every f_i positive.
      if (step[i] < 0.0) t = std::min(t, -0.9 * f[i] / step[i]);
    }
    double next = 0.0;
    for (;;) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = f[i] + t * step[i];
      next = discrete_value(out.grid, a, trial);
      if (next <= value + 1e-4 * t * slope) break;
      t *= 0.5;
      if (t < kStepFloor) break;
    }
    if (t < kStepFloor) {
      // No representable decrease left; accept if already at rounding level.
      if (out.projected_gradient < 1e3 * kTol) {
        out.density = std::move(f);
        out.value = value;
        out.iterations = it;
        return out;
      }
      throw NumericalFailure("minimize_numeric: line search stalled");
    }
    f.swap(trial);
    value = next;
  }
  throw NumericalFailure("minimize_numeric: no convergence in 100000 iterations");
}

// ------------------------------------------------------------- constants --

namespace {

void require_dimension(int d) {
  if (d != 2 && d != 3) {
    throw InputError("asymptotic constants are only evaluated for d = 2, 3 (got " +
                     std::to_string(d) + ")");
  }
}

}  // namespace

double alpha_dj(int d, int j) {
  require_dimension(d);
  const double e = 2.0 / (d - 1.0);
  return (d - 1.0) / (d + 1.0) * std::pow(d * ball_volume(d) / ball_volume(d - 1), e) *
         std::tgamma(j + 1.0 + e) / std::tgamma(j + 1.0);
}

double ball_intrinsic_volume(int d, int j) {
  double binom = 1.0;
  for (int i = 1; i <= j; ++i) binom = binom * (d - j + i) / i;
  return binom * ball_volume(d) / ball_volume(d - j);
}

AsymptoticConstant asymptotic_constant(AsymptoticConstant::Kind kind, int d, int j) {
  require_dimension(d);
  AsymptoticConstant out{kind, d, j, 0.0};
  const double e = 2.0 / (d - 1.0);
  switch (kind) {
    case AsymptoticConstant::Kind::c_dj:
      if (j < 1 || j > d) throw InputError("c_dj: j outside 1..d");
      out.value = j * ball_intrinsic_volume(d, j) / 2.0 * alpha_dj(d, j);
      break;
    case AsymptoticConstant::Kind::c_tilde_volume:
      out.value = std::tgamma(1.0 + e) / (2.0 * std::pow(ball_volume(d - 1), e));
      break;
    case AsymptoticConstant::Kind::c_tilde_mean_width:
      out.value =
          std::pow(sphere_area(d) / ball_volume(d - 1), e) * std::tgamma(1.0 + e);
      break;
  }
  return out;
}

// ------------------------------------------------------------- rigidity --

double density_gap(const ConvexBody& body, const DensitySpec& a, const DensitySpec& b) {
  const double v = integrate_boundary(
      body, [&](const BoundaryPoint& bp) { return std::abs(a(bp) - b(bp)); }, 1e-10,
      1e-14);
  return 0.5 * v;
}

double suboptimality_factor(const BodyPtr& body, int j, const DensitySpec& density) {
  const auto fn = QuantFunctional::intrinsic(body, j);
  return eval_quant(fn, density) / holder_bound(fn);
}

}  // namespace polyapprox
