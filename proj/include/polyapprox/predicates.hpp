#pragma once

#include "polyapprox/geometry.hpp"

namespace polyapprox {

// Exact-sign orientation predicates. A floating-point filter decides the
// easy cases; near-degenerate inputs fall back to exact rational arithmetic
// on the (exactly representable) double coordinates.

/// Sign of cross(b - a, c - a): +1 if a, b, c turn counterclockwise.
int orient2d(Vec2 a, Vec2 b, Vec2 c);

/// Sign of dot(cross(b - a, c - a), p - a): +1 if p lies on the side the
/// right-handed normal of triangle (a, b, c) points to.
int orient3d(Vec3 a, Vec3 b, Vec3 c, Vec3 p);

/// Number of orient3d calls that needed the exact fallback (diagnostics).
long exact_fallback_count();

}  // namespace polyapprox
