#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyapprox/bodies.hpp"
#include "polyapprox/sampling.hpp"

namespace polyapprox {

/// Quantization functional I(f) = integral of w f^{-a} dS with a = 2/(d-1)
/// and a curvature weight w = kappa^p * H_m^q:
///   volume       w = kappa^{1/(d-1)}
///   mean width   w = kappa^{d/(d-1)}
///   intrinsic j  w = kappa^{1/(d-1)} H_{d-j}
class QuantFunctional {
 public:
  enum class Weight { volume, mean_width, intrinsic };

  static QuantFunctional volume(BodyPtr body);
  static QuantFunctional mean_width(BodyPtr body);
  static QuantFunctional intrinsic(BodyPtr body, int j);

  Weight weight_kind() const { return kind_; }
  int j() const { return j_; }
  const ConvexBody& body() const { return *body_; }
  const BodyPtr& body_ptr() const { return body_; }

  /// a = 2 / (d - 1).
  double exponent() const;
  double kappa_power() const { return kappa_power_; }
  int h_index() const { return h_index_; }
  double h_power() const { return h_power_; }

  double weight(const BoundaryPoint& bp) const;
  std::string label() const;

 private:
  QuantFunctional(BodyPtr body, Weight kind, int j, double kp, int m, double hp);

  BodyPtr body_;
  Weight kind_;
  int j_;
  double kappa_power_;
  int h_index_;
  double h_power_;
};

/// Adaptive quadrature of the functional at a normalized density.
double eval_quant(const QuantFunctional& fn, const DensitySpec& density);

/// Hoelder lower bound (integral of w^{1/(a+1)} dS)^{a+1}.
double holder_bound(const QuantFunctional& fn);

/// The unique minimizer w^{1/(a+1)} / integral of w^{1/(a+1)} dS.
DensitySpec holder_optimal(const QuantFunctional& fn);

/// Quadrature grid for the discrete problem: d = 2 uses n equal theta
/// cells; d = 3 uses Gauss-Legendre nodes in phi times equal lambda cells
/// (n_phi = floor(sqrt(n / 2)), n_lambda = n / n_phi).
struct QuantGrid {
  std::vector<BoundaryPoint> points;
  std::vector<double> measure;  // dS mass of each cell
  std::vector<double> weight;   // functional weight at each node
};

QuantGrid make_quant_grid(const QuantFunctional& fn, int grid_size);

/// sum_i weight_i * measure_i * density_i^{-a}.
double discrete_value(const QuantGrid& grid, double a, std::span<const double> density);

struct DiscreteMinimum {
  QuantGrid grid;
  std::vector<double> density;
  double value = 0.0;
  int iterations = 0;
  double projected_gradient = 0.0;  // relative, at termination
};

/// Minimizes the discretized functional over positive densities with
/// sum density_i * measure_i = 1. Uses a diagonally scaled projected gradient
/// with Armijo backtracking, started from `start` (rescaled to the
/// constraint) or the uniform density. Converges when the relative projected
/// gradient norm drops below 1e-10; NumericalFailure after 1e5 iterations.
DiscreteMinimum minimize_numeric(const QuantFunctional& fn, int grid_size,
                                 std::optional<std::vector<double>> start = std::nullopt);

struct AsymptoticConstant {
  enum class Kind { c_dj, c_tilde_volume, c_tilde_mean_width };
  Kind kind = Kind::c_dj;
  int d = 2;
  int j = 0;
  double value = 0.0;
};

/// alpha(d, j) = (d-1)/(d+1) (d vol_d(B_d) / vol_{d-1}(B_{d-1}))^{2/(d-1)}
///               * Gamma(j + 1 + 2/(d-1)) / Gamma(j + 1).
double alpha_dj(int d, int j);
/// V_j(B_d) = binom(d, j) vol_d(B_d) / vol_{d-j}(B_{d-j}).
double ball_intrinsic_volume(int d, int j);
/// Throws InputError unless d is 2 or 3 (and 1 <= j <= d for c_dj).
AsymptoticConstant asymptotic_constant(AsymptoticConstant::Kind kind, int d, int j = 0);

/// Total variation distance (1/2) integral |f1 - f2| dS.
double density_gap(const ConvexBody& body, const DensitySpec& a, const DensitySpec& b);

/// I_j(density) / holder_bound(I_j): predicted limit of the ratio of the
/// expected j-th deviation under `density` to the best achievable one.
double suboptimality_factor(const BodyPtr& body, int j, const DensitySpec& density);

}  // namespace polyapprox
