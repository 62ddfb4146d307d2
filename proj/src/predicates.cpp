#include "polyapprox/predicates.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <limits>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

namespace polyapprox {

namespace {

using boost::multiprecision::cpp_int;

std::atomic<long> g_fallbacks{0};

// Conservative relative bounds (Shewchuk's first-stage bounds are
// 3.3e-16 and 7.8e-16; these leave slack for the translated form used here).
constexpr double kOrient2dBound = 1e-15;
constexpr double kOrient3dBound = 4e-15;

// Every finite double is an integer multiple of 2^(exponent - 53), so
// scaling all inputs by the smallest such power makes them exact integers
// and the determinant sign can be taken in integer arithmetic.
template <std::size_t N>
std::array<cpp_int, N> exact_integers(const std::array<double, N>& v) {
  int base = std::numeric_limits<int>::max();
  for (double x : v) {
    if (x != 0.0) base = std::min(base, std::ilogb(x) - 52);
  }
  std::array<cpp_int, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    if (v[i] == 0.0) continue;
    const int e = std::ilogb(v[i]) - 52;
    const auto mantissa = static_cast<std::int64_t>(std::scalbn(v[i], -e));
    out[i] = cpp_int(mantissa) << (e - base);
  }
  return out;
}

}  // namespace

int orient2d(Vec2 a, Vec2 b, Vec2 c) {
  const double left = (b.x - a.x) * (c.y - a.y);
  const double right = (b.y - a.y) * (c.x - a.x);
  const double det = left - right;
  const double bound = kOrient2dBound * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  g_fallbacks.fetch_add(1, std::memory_order_relaxed);
  const auto z = exact_integers<6>({a.x, a.y, b.x, b.y, c.x, c.y});
  const cpp_int det_exact = (z[2] - z[0]) * (z[5] - z[1]) - (z[3] - z[1]) * (z[4] - z[0]);
  return det_exact.sign();
}

int orient3d(Vec3 a, Vec3 b, Vec3 c, Vec3 p) {
  const double ux = b.x - a.x, uy = b.y - a.y, uz = b.z - a.z;
  const double vx = c.x - a.x, vy = c.y - a.y, vz = c.z - a.z;
  const double wx = p.x - a.x, wy = p.y - a.y, wz = p.z - a.z;
  const double m1 = uy * vz - uz * vy;
  const double m2 = uz * vx - ux * vz;
  const double m3 = ux * vy - uy * vx;
  const double det = m1 * wx + m2 * wy + m3 * wz;
  const double permanent = (std::abs(uy * vz) + std::abs(uz * vy)) * std::abs(wx) +
                           (std::abs(uz * vx) + std::abs(ux * vz)) * std::abs(wy) +
                           (std::abs(ux * vy) + std::abs(uy * vx)) * std::abs(wz);
  const double bound = kOrient3dBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  g_fallbacks.fetch_add(1, std::memory_order_relaxed);
  const auto z = exact_integers<12>({a.x, a.y, a.z, b.x, b.y, b.z, c.x, c.y, c.z, p.x, p.y, p.z});
  const cpp_int Ux = z[3] - z[0], Uy = z[4] - z[1], Uz = z[5] - z[2];
  const cpp_int Vx = z[6] - z[0], Vy = z[7] - z[1], Vz = z[8] - z[2];
  const cpp_int Wx = z[9] - z[0], Wy = z[10] - z[1], Wz = z[11] - z[2];
  const cpp_int exact = (Uy * Vz - Uz * Vy) * Wx + (Uz * Vx - Ux * Vz) * Wy + (Ux * Vy - Uy * Vx) * Wz;
  return exact.sign();
}

long exact_fallback_count() { return g_fallbacks.load(std::memory_order_relaxed); }

}  // namespace polyapprox
