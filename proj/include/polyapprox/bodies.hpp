#pragma once

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "polyapprox/geometry.hpp"

namespace polyapprox {

/// Boundary parameter: theta for d = 2, (phi, lambda) for d = 3.
struct Parameter {
  double t = 0.0;
  double s = 0.0;
};

/// Everything the density and functional code needs at one boundary point.
/// For d = 2 the z components of position and normal are zero and only
/// principal[0] is meaningful.
struct BoundaryPoint {
  int dim = 2;
  Parameter parameter;
  Vec3 position;
  Vec3 normal;
  double kappa = 0.0;                  // Gauss curvature
  std::array<double, 2> principal{};   // nonincreasing, d-1 entries used
  double area_element = 0.0;           // dS per unit parameter measure

  /// Normalized elementary symmetric polynomial H_m of the principal
  /// curvatures (H_0 = 1, H_{d-1} = kappa).
  double symmetric_curvature(int m) const;
};

/// Smooth strictly convex body with the origin in its interior.
///
/// Implementations are immutable; all queries are reentrant. Reference
/// intrinsic volumes are evaluated lazily (closed form where available,
/// adaptive quadrature otherwise) and cached.
class ConvexBody : public std::enable_shared_from_this<ConvexBody> {
 public:
  virtual ~ConvexBody() = default;

  virtual int dimension() const = 0;
  /// Canonical text form in the body grammar, e.g. "ellipse:a=2,b=1".
  virtual std::string name() const = 0;

  /// h_K(u); throws InputError unless |u| = 1 within 1e-9.
  double support(Vec3 u) const;
  /// Gauge (Minkowski functional) of K: 1 exactly on the boundary.
  virtual double gauge(Vec3 x) const = 0;

  virtual BoundaryPoint boundary(Parameter p) const = 0;
  /// Boundary point whose outer unit normal is u.
  virtual BoundaryPoint boundary_at_normal(Vec3 u) const = 0;

  /// Upper corner of the parameter rectangle; the lower corner is zero.
  Parameter parameter_extent() const;

  /// Surface measure: perimeter (d=2) or surface area (d=3).
  double surface_measure() const;
  /// Area (d=2) or volume (d=3).
  double volume() const;
  double mean_width() const;
  /// V_j for j in 1..d.
  double intrinsic_volume(int j) const;

  /// Polar body K°. Throws CapabilityError for unsupported families.
  virtual std::shared_ptr<const ConvexBody> polar() const = 0;

  /// True for Euclidean balls (used only for reporting).
  virtual bool is_ball() const { return false; }

 protected:
  virtual double support_unchecked(Vec3 u) const = 0;
  virtual std::optional<double> closed_form_surface() const { return std::nullopt; }
  virtual std::optional<double> closed_form_volume() const { return std::nullopt; }
  virtual std::optional<double> closed_form_mean_width() const { return std::nullopt; }

 private:
  struct References {
    double surface = 0.0;
    double volume = 0.0;
    double mean_width = 0.0;
  };
  const References& references() const;

  mutable std::once_flag refs_once_;
  mutable References refs_;
};

using BodyPtr = std::shared_ptr<const ConvexBody>;

/// Ball of radius r in dimension d (2 or 3).
BodyPtr make_ball(double r, int d = 2);
BodyPtr make_ellipse(double a, double b);
BodyPtr make_ellipsoid(double a, double b, double c);
/// Planar body with support function
///   h(theta) = c0 + sum_k c_k cos(k theta) + s_k sin(k theta),
/// cos_coeffs[k] = c_k (index 0 is c0), sin_coeffs[k] = s_k (index 0 unused).
/// Throws InputError unless h > 0 and h + h'' > 0 on a 4096-point grid.
BodyPtr make_support_curve(std::vector<double> cos_coeffs,
                           std::vector<double> sin_coeffs);

/// Parses the body grammar: "ball:r=1[,d=3]", "ellipse:a=2,b=1",
/// "ellipsoid:a=1,b=1,c=2", "support2d:c0=1,c2=0.1,s3=0.02".
BodyPtr parse_body(const std::string& text);

/// Evenly spaced midpoint parameters covering the domain; d=2: n values of
/// theta, d=3: an n_phi x n_lambda grid, n_phi = floor(sqrt(n)),
/// n_lambda = ceil(n / n_phi).
std::vector<Parameter> parameter_grid(const ConvexBody& body, int n);

/// Adaptive quadrature of g over the boundary with respect to dS.
double integrate_boundary(const ConvexBody& body,
                          const std::function<double(const BoundaryPoint&)>& g,
                          double rel_tol = 1e-11, double abs_tol = 0.0);

/// max kappa / min kappa over a parameter grid.
double curvature_range_ratio(const ConvexBody& body, int grid = 4096);

}  // namespace polyapprox
