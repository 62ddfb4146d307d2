#include "polyapprox/bodies.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "polyapprox/errors.hpp"
#include "polyapprox/quadrature.hpp"
#include "polyapprox/text.hpp"

namespace polyapprox {

double BoundaryPoint::symmetric_curvature(int m) const {
  if (m == 0) return 1.0;
  if (m == dim - 1) return kappa;
  // Only d = 3, m = 1 remains.
  return 0.5 * (principal[0] + principal[1]);
}

double ConvexBody::support(Vec3 u) const {
  const double n = norm(u);
  if (!(std::abs(n - 1.0) <= 1e-9)) {
    throw InputError("support: direction is not a unit vector (norm " +
                     format_number(n) + ")");
  }
  return support_unchecked(u);
}

Parameter ConvexBody::parameter_extent() const {
  if (dimension() == 2) return {2.0 * kPi, 0.0};
  return {kPi, 2.0 * kPi};
}

const ConvexBody::References& ConvexBody::references() const {
  std::call_once(refs_once_, [this] {
    const int d = dimension();
    auto integrate_boundary = [&](auto&& g) {
      return polyapprox::integrate_boundary(*this, g, 1e-12);
    };
    if (auto s = closed_form_surface()) {
      refs_.surface = *s;
    } else {
      refs_.surface = integrate_boundary([](const BoundaryPoint&) { return 1.0; });
    }
    if (auto v = closed_form_volume()) {
      refs_.volume = *v;
    } else {
      // Divergence theorem: vol = (1/d) * integral of <x, n> dS.
      refs_.volume = integrate_boundary([](const BoundaryPoint& bp) {
                       return dot(bp.position, bp.normal);
                     }) /
                     d;
    }
    if (auto w = closed_form_mean_width()) {
      refs_.mean_width = *w;
    } else if (d == 2) {
      refs_.mean_width = refs_.surface / kPi;  // Cauchy
    } else {
      const double integral = quad::integrate_2d(
          [&](double phi, double lam) {
            const Vec3 u{std::sin(phi) * std::cos(lam), std::sin(phi) * std::sin(lam),
                         std::cos(phi)};
            return support_unchecked(u) * std::sin(phi);
          },
          0.0, kPi, 0.0, 2.0 * kPi, 1e-12, 8);
      refs_.mean_width = 2.0 * integral / sphere_area(3);
    }
  });
  return refs_;
}

double ConvexBody::surface_measure() const { return references().surface; }
double ConvexBody::volume() const { return references().volume; }
double ConvexBody::mean_width() const { return references().mean_width; }

double ConvexBody::intrinsic_volume(int j) const {
  const int d = dimension();
  if (j < 1 || j > d) {
    throw InputError("intrinsic_volume: index " + std::to_string(j) +
                     " outside 1.." + std::to_string(d));
  }
  if (j == d) return volume();
  if (j == d - 1) return 0.5 * surface_measure();
  // d = 3, j = 1: V_1 = d vol_d(B_d) / (2 vol_{d-1}(B_{d-1})) * w = 2 w.
  return d * ball_volume(d) / (2.0 * ball_volume(d - 1)) * mean_width();
}

namespace {

double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  return t;
}

// ---------------------------------------------------------------- ellipse --

class Ellipse final : public ConvexBody {
 public:
  Ellipse(double a, double b, bool ball) : a_(a), b_(b), ball_(ball) {}

  int dimension() const override { return 2; }
  std::string name() const override {
    if (ball_) return "ball:r=" + format_number(a_) + ",d=2";
    return "ellipse:a=" + format_number(a_) + ",b=" + format_number(b_);
  }
  bool is_ball() const override { return ball_; }

  double gauge(Vec3 x) const override {
    return std::hypot(x.x / a_, x.y / b_);
  }

  BoundaryPoint boundary(Parameter p) const override {
    const double c = std::cos(p.t);
    const double s = std::sin(p.t);
    BoundaryPoint bp;
    bp.dim = 2;
    bp.parameter = {p.t, 0.0};
    bp.position = {a_ * c, b_ * s, 0.0};
    const double speed = std::sqrt(a_ * a_ * s * s + b_ * b_ * c * c);
    bp.normal = {b_ * c / speed, a_ * s / speed, 0.0};
    bp.area_element = speed;
    bp.kappa = ball_ ? 1.0 / a_ : a_ * b_ / (speed * speed * speed);
    bp.principal = {bp.kappa, 0.0};
    return bp;
  }

  BoundaryPoint boundary_at_normal(Vec3 u) const override {
    const double h = support_unchecked(u);
    const double x = a_ * a_ * u.x / h;
    const double y = b_ * b_ * u.y / h;
    return boundary({wrap_angle(std::atan2(y / b_, x / a_)), 0.0});
  }

  std::shared_ptr<const ConvexBody> polar() const override {
    return std::make_shared<Ellipse>(1.0 / a_, 1.0 / b_, ball_);
  }

 protected:
  double support_unchecked(Vec3 u) const override {
    return std::hypot(a_ * u.x, b_ * u.y);
  }
  std::optional<double> closed_form_surface() const override {
    if (ball_) return 2.0 * kPi * a_;
    return std::nullopt;
  }
  std::optional<double> closed_form_volume() const override { return kPi * a_ * b_; }
  std::optional<double> closed_form_mean_width() const override {
    if (ball_) return 2.0 * a_;
    return std::nullopt;
  }

 private:
  double a_;
  double b_;
  bool ball_;
};

// -------------------------------------------------------------- ellipsoid --

class Ellipsoid final : public ConvexBody {
 public:
  Ellipsoid(double a, double b, double c, bool ball) : a_(a), b_(b), c_(c), ball_(ball) {}

  int dimension() const override { return 3; }
  std::string name() const override {
    if (ball_) return "ball:r=" + format_number(a_) + ",d=3";
    return "ellipsoid:a=" + format_number(a_) + ",b=" + format_number(b_) +
           ",c=" + format_number(c_);
  }
  bool is_ball() const override { return ball_; }

  double gauge(Vec3 x) const override {
    return std::sqrt(x.x * x.x / (a_ * a_) + x.y * x.y / (b_ * b_) +
                     x.z * x.z / (c_ * c_));
  }

  BoundaryPoint boundary(Parameter p) const override {
    const double sp = std::sin(p.t);
    const double cp = std::cos(p.t);
    const double sl = std::sin(p.s);
    const double cl = std::cos(p.s);
    BoundaryPoint bp;
    bp.dim = 3;
    bp.parameter = p;
    const Vec3 x{a_ * sp * cl, b_ * sp * sl, c_ * cp};
    bp.position = x;
    const Vec3 grad{x.x / (a_ * a_), x.y / (b_ * b_), x.z / (c_ * c_)};
    bp.normal = normalized(grad);
    const double g2 = dot(grad, grad);
    bp.kappa = 1.0 / (a_ * a_ * b_ * b_ * c_ * c_ * g2 * g2);

    const Vec3 x_phi{a_ * cp * cl, b_ * cp * sl, -c_ * sp};
    const Vec3 x_lam{-a_ * sp * sl, b_ * sp * cl, 0.0};
    bp.area_element = norm(cross(x_phi, x_lam));

    if (ball_) {
      bp.principal = {1.0 / a_, 1.0 / a_};
      return bp;
    }
    if (std::abs(sp) < 1e-7) {
      // Pole (0, 0, +-c): principal directions are the x and y axes.
      const double k1 = c_ / (a_ * a_);
      const double k2 = c_ / (b_ * b_);
      bp.principal = {std::max(k1, k2), std::min(k1, k2)};
      return bp;
    }
    // Shape operator from the first and second fundamental forms.
    const Vec3 x_phiphi = -x;
    const Vec3 x_philam{-a_ * cp * sl, b_ * cp * cl, 0.0};
    const Vec3 x_lamlam{-a_ * sp * cl, -b_ * sp * sl, 0.0};
    const double E = dot(x_phi, x_phi);
    const double F = dot(x_phi, x_lam);
    const double G = dot(x_lam, x_lam);
    const double L = -dot(x_phiphi, bp.normal);
    const double M = -dot(x_philam, bp.normal);
    const double N = -dot(x_lamlam, bp.normal);
    const double det_i = E * G - F * F;
    const double gauss = (L * N - M * M) / det_i;
    const double mean = (E * N - 2.0 * F * M + G * L) / (2.0 * det_i);
    const double disc = std::sqrt(std::max(0.0, mean * mean - gauss));
    const double k1 = mean + disc;
    // k2 from the product is better conditioned near umbilics.
    bp.principal = {k1, gauss / k1};
    return bp;
  }

  BoundaryPoint boundary_at_normal(Vec3 u) const override {
    const double h = support_unchecked(u);
    const Vec3 x{a_ * a_ * u.x / h, b_ * b_ * u.y / h, c_ * c_ * u.z / h};
    const double phi = std::acos(std::clamp(x.z / c_, -1.0, 1.0));
    const double lam = wrap_angle(std::atan2(x.y / b_, x.x / a_));
    return boundary({phi, lam});
  }

  std::shared_ptr<const ConvexBody> polar() const override {
    return std::make_shared<Ellipsoid>(1.0 / a_, 1.0 / b_, 1.0 / c_, ball_);
  }

 protected:
  double support_unchecked(Vec3 u) const override {
    return std::sqrt(a_ * a_ * u.x * u.x + b_ * b_ * u.y * u.y + c_ * c_ * u.z * u.z);
  }
  std::optional<double> closed_form_surface() const override {
    if (ball_) return 4.0 * kPi * a_ * a_;
    return std::nullopt;
  }
  std::optional<double> closed_form_volume() const override {
    return 4.0 / 3.0 * kPi * a_ * b_ * c_;
  }
  std::optional<double> closed_form_mean_width() const override {
    if (ball_) return 2.0 * a_;
    return std::nullopt;
  }

 private:
  double a_;
  double b_;
  double c_;
  bool ball_;
};

// ---------------------------------------------------------- support curve --

struct Harmonics {
  std::vector<double> c;  // c[0] = c0
  std::vector<double> s;  // s[0] unused

  // h and its first two derivatives at theta.
  std::array<double, 3> eval(double t) const {
    double h = c.empty() ? 0.0 : c[0];
    double h1 = 0.0;
    double h2 = 0.0;
    const std::size_t n = std::max(c.size(), s.size());
    for (std::size_t k = 1; k < n; ++k) {
      const double ck = k < c.size() ? c[k] : 0.0;
      const double sk = k < s.size() ? s[k] : 0.0;
      if (ck == 0.0 && sk == 0.0) continue;
      const double kk = static_cast<double>(k);
      const double co = std::cos(kk * t);
      const double si = std::sin(kk * t);
      h += ck * co + sk * si;
      h1 += kk * (-ck * si + sk * co);
      h2 += -kk * kk * (ck * co + sk * si);
    }
    return {h, h1, h2};
  }
};

class PolarSupportCurve;

class SupportCurve final : public ConvexBody {
 public:
  explicit SupportCurve(Harmonics hm) : hm_(std::move(hm)) {}

  int dimension() const override { return 2; }
  std::string name() const override {
    std::string out = "support2d:";
    bool first = true;
    auto add = [&](const std::string& key, double v) {
      if (!first) out += ",";
      out += key + "=" + format_number(v);
      first = false;
    };
    for (std::size_t k = 0; k < hm_.c.size(); ++k) {
      if (k == 0 || hm_.c[k] != 0.0) add("c" + std::to_string(k), hm_.c[k]);
    }
    for (std::size_t k = 1; k < hm_.s.size(); ++k) {
      if (hm_.s[k] != 0.0) add("s" + std::to_string(k), hm_.s[k]);
    }
    return out;
  }

  /// Normal angle theta of the boundary point on the ray through x.
  double ray_parameter(Vec3 x) const {
    const double target = std::atan2(x.y, x.x);
    // The polar angle of x(theta) is increasing and stays within pi/2 of
    // theta because <x(theta), u(theta)> = h(theta) > 0.
    auto offset = [&](double t) {
      const Vec2 p = drop(position(t));
      double diff = std::atan2(p.y, p.x) - target;
      diff = std::remainder(diff, 2.0 * kPi);
      return diff;
    };
    double lo = target - 0.5 * kPi;
    double hi = target + 0.5 * kPi;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (offset(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return wrap_angle(0.5 * (lo + hi));
  }

  double gauge(Vec3 x) const override {
    const double r = norm(x);
    if (r == 0.0) return 0.0;
    return r / norm(position(ray_parameter(x)));
  }

  BoundaryPoint boundary(Parameter p) const override {
    const auto [h, h1, h2] = hm_.eval(p.t);
    const double c = std::cos(p.t);
    const double s = std::sin(p.t);
    BoundaryPoint bp;
    bp.dim = 2;
    bp.parameter = {p.t, 0.0};
    bp.position = {h * c - h1 * s, h * s + h1 * c, 0.0};
    bp.normal = {c, s, 0.0};
    bp.area_element = h + h2;
    bp.kappa = 1.0 / (h + h2);
    bp.principal = {bp.kappa, 0.0};
    return bp;
  }

  BoundaryPoint boundary_at_normal(Vec3 u) const override {
    return boundary({wrap_angle(std::atan2(u.y, u.x)), 0.0});
  }

  std::shared_ptr<const ConvexBody> polar() const override;

  double h(double t) const { return hm_.eval(t)[0]; }
  const Harmonics& harmonics() const { return hm_; }

 protected:
  double support_unchecked(Vec3 u) const override {
    return hm_.eval(std::atan2(u.y, u.x))[0];
  }
  std::optional<double> closed_form_surface() const override {
    return 2.0 * kPi * hm_.c[0];
  }
  std::optional<double> closed_form_volume() const override {
    // (1/2) * integral of (h^2 - h'^2) d theta.
    double area = kPi * hm_.c[0] * hm_.c[0];
    const std::size_t n = std::max(hm_.c.size(), hm_.s.size());
    for (std::size_t k = 1; k < n; ++k) {
      const double ck = k < hm_.c.size() ? hm_.c[k] : 0.0;
      const double sk = k < hm_.s.size() ? hm_.s[k] : 0.0;
      const double kk = static_cast<double>(k);
      area += 0.5 * kPi * (1.0 - kk * kk) * (ck * ck + sk * sk);
    }
    return area;
  }
  std::optional<double> closed_form_mean_width() const override {
    return 2.0 * hm_.c[0];
  }

 private:
  Vec3 position(double t) const {
    const auto [h, h1, h2] = hm_.eval(t);
    const double c = std::cos(t);
    const double s = std::sin(t);
    return {h * c - h1 * s, h * s + h1 * c, 0.0};
  }

  Harmonics hm_;
};

// Polar of a support curve, parametrized by the normal angle theta of the
// original curve: y(theta) = u(theta) / h(theta).
class PolarSupportCurve final : public ConvexBody {
 public:
  explicit PolarSupportCurve(std::shared_ptr<const SupportCurve> original)
      : original_(std::move(original)) {}

  int dimension() const override { return 2; }
  std::string name() const override { return "polar(" + original_->name() + ")"; }

  double gauge(Vec3 x) const override {
    const double r = norm(x);
    if (r == 0.0) return 0.0;
    return r * original_->support((1.0 / r) * x);
  }

  BoundaryPoint boundary(Parameter p) const override {
    const auto [h, h1, h2] = original_->harmonics().eval(p.t);
    const Vec2 u{std::cos(p.t), std::sin(p.t)};
    const Vec2 up{-u.y, u.x};
    const Vec2 y = (1.0 / h) * u;
    const Vec2 y1 = (1.0 / h) * up - (h1 / (h * h)) * u;
    const Vec2 y2 = (-1.0 / h - h2 / (h * h) + 2.0 * h1 * h1 / (h * h * h)) * u -
                    (2.0 * h1 / (h * h)) * up;
    const double speed = norm(y1);
    BoundaryPoint bp;
    bp.dim = 2;
    bp.parameter = {p.t, 0.0};
    bp.position = lift(y);
    // Outer normal of K° at y is the direction of the K point with normal u.
    const Vec2 x = h * u + h1 * up;
    bp.normal = lift((1.0 / norm(x)) * x);
    bp.area_element = speed;
    bp.kappa = cross(y1, y2) / (speed * speed * speed);
    bp.principal = {bp.kappa, 0.0};
    return bp;
  }

  BoundaryPoint boundary_at_normal(Vec3 u) const override {
    return boundary({original_->ray_parameter(u), 0.0});
  }

  std::shared_ptr<const ConvexBody> polar() const override { return original_; }

 protected:
  double support_unchecked(Vec3 u) const override { return original_->gauge(u); }

 private:
  std::shared_ptr<const SupportCurve> original_;
};

std::shared_ptr<const ConvexBody> SupportCurve::polar() const {
  return std::make_shared<PolarSupportCurve>(
      std::static_pointer_cast<const SupportCurve>(shared_from_this()));
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InputError(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

BodyPtr make_ball(double r, int d) {
  require_positive(r, "ball radius");
  if (d == 2) return std::make_shared<Ellipse>(r, r, true);
  if (d == 3) return std::make_shared<Ellipsoid>(r, r, r, true);
  throw InputError("ball dimension must be 2 or 3");
}

BodyPtr make_ellipse(double a, double b) {
  require_positive(a, "ellipse semi-axis a");
  require_positive(b, "ellipse semi-axis b");
  return std::make_shared<Ellipse>(a, b, false);
}

BodyPtr make_ellipsoid(double a, double b, double c) {
  require_positive(a, "ellipsoid semi-axis a");
  require_positive(b, "ellipsoid semi-axis b");
  require_positive(c, "ellipsoid semi-axis c");
  return std::make_shared<Ellipsoid>(a, b, c, false);
}

BodyPtr make_support_curve(std::vector<double> cos_coeffs,
                           std::vector<double> sin_coeffs) {
  if (cos_coeffs.empty()) cos_coeffs.push_back(0.0);
  if (sin_coeffs.empty()) sin_coeffs.push_back(0.0);
  Harmonics hm{std::move(cos_coeffs), std::move(sin_coeffs)};
  constexpr int kGrid = 4096;
  for (int i = 0; i < kGrid; ++i) {
    const auto [h, h1, h2] = hm.eval(2.0 * kPi * i / kGrid);
    if (!(h > 0.0)) {
      throw InputError("support2d: origin is not interior (h <= 0 at grid point " +
                       std::to_string(i) + ")");
    }
    if (!(h + h2 > 0.0)) {
      throw InputError("support2d: h + h'' <= 0 at grid point " + std::to_string(i) +
                       " (curvature not positive)");
    }
  }
  return std::make_shared<SupportCurve>(std::move(hm));
}

BodyPtr parse_body(const std::string& text) {
  const auto [kind, params] = split_kind(text);
  if (kind == "ball") {
    const auto kv = parse_key_values(params, {"r", "d"});
    const double r = kv.count("r") ? kv.at("r") : 1.0;
    const double d = kv.count("d") ? kv.at("d") : 2.0;
    if (d != 2.0 && d != 3.0) throw InputError("ball: d must be 2 or 3");
    return make_ball(r, static_cast<int>(d));
  }
  if (kind == "ellipse") {
    const auto kv = parse_key_values(params, {"a", "b"});
    if (!kv.count("a") || !kv.count("b")) throw InputError("ellipse: needs a and b");
    return make_ellipse(kv.at("a"), kv.at("b"));
  }
  if (kind == "ellipsoid") {
    const auto kv = parse_key_values(params, {"a", "b", "c"});
    if (!kv.count("a") || !kv.count("b") || !kv.count("c")) {
      throw InputError("ellipsoid: needs a, b and c");
    }
    return make_ellipsoid(kv.at("a"), kv.at("b"), kv.at("c"));
  }
  if (kind == "support2d") {
    const auto kv = parse_key_values(params, {});
    std::vector<double> c(1, 0.0);
    std::vector<double> s(1, 0.0);
    for (const auto& [key, value] : kv) {
      if (key.size() < 2 || (key[0] != 'c' && key[0] != 's')) {
        throw InputError("support2d: unknown coefficient '" + key + "'");
      }
      std::size_t k = 0;
      const auto* first = key.data() + 1;
      const auto* last = key.data() + key.size();
      auto res = std::from_chars(first, last, k);
      if (res.ec != std::errc{} || res.ptr != last || k > 64 ||
          (key[0] == 's' && k == 0)) {
        throw InputError("support2d: bad coefficient index in '" + key + "'");
      }
      auto& vec = key[0] == 'c' ? c : s;
      if (vec.size() <= k) vec.resize(k + 1, 0.0);
      vec[k] = value;
    }
    return make_support_curve(std::move(c), std::move(s));
  }
  throw InputError("unknown body kind '" + kind + "'");
}

std::vector<Parameter> parameter_grid(const ConvexBody& body, int n) {
  std::vector<Parameter> out;
  if (n < 1) return out;
  if (body.dimension() == 2) {
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back({2.0 * kPi * (i + 0.5) / n, 0.0});
    return out;
  }
  const int n_phi = std::max(1, static_cast<int>(std::floor(std::sqrt(double(n)))));
  const int n_lam = (n + n_phi - 1) / n_phi;
  out.reserve(static_cast<std::size_t>(n_phi) * n_lam);
  for (int i = 0; i < n_phi; ++i) {
    for (int k = 0; k < n_lam; ++k) {
      out.push_back({kPi * (i + 0.5) / n_phi, 2.0 * kPi * (k + 0.5) / n_lam});
    }
  }
  return out;
}

double integrate_boundary(const ConvexBody& body,
                          const std::function<double(const BoundaryPoint&)>& g,
                          double rel_tol, double abs_tol) {
  if (body.dimension() == 2) {
    return quad::integrate(
        [&](double t) {
          const BoundaryPoint bp = body.boundary({t, 0.0});
          return g(bp) * bp.area_element;
        },
        0.0, 2.0 * kPi, rel_tol, 16, abs_tol);
  }
  return quad::integrate_2d(
      [&](double phi, double lam) {
        const BoundaryPoint bp = body.boundary({phi, lam});
        return g(bp) * bp.area_element;
      },
      0.0, kPi, 0.0, 2.0 * kPi, rel_tol, 8, abs_tol);
}

double curvature_range_ratio(const ConvexBody& body, int grid) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const Parameter& p : parameter_grid(body, grid)) {
    const double k = body.boundary(p).kappa;
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  // Ellipse and ellipsoid extremes sit at the axis endpoints, which a
  // midpoint grid misses; include the axis directions explicitly.
  {
    std::vector<Vec3> axes{{1, 0, 0}, {0, 1, 0}};
    if (body.dimension() == 3) axes.push_back({0, 0, 1});
    for (Vec3 u : axes) {
      const double k = body.boundary_at_normal(u).kappa;
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
  }
  return hi / lo;
}

}  // namespace polyapprox
