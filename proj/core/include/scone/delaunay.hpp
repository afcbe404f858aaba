#pragma once

#include <array>
#include <span>
#include <vector>

#include "scone/complex.hpp"

namespace scone {

/// Sign-exact enough for unit-scale inputs: > 0 when (a, b, c) turn left.
double orient2d(const Point2& a, const Point2& b, const Point2& c);
/// > 0 when d lies inside the circumcircle of the counter-clockwise triangle (a, b, c).
double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

/// Delaunay triangulation of a planar point set (Bowyer-Watson insertion).
///
/// Triangles come back counter-clockwise, indexing into `points`, and cover
/// the convex hull. Hull notches left by the bounding triangle are filled
/// and any remaining non-Delaunay edge is flipped, so every circumcircle is
/// empty up to the in-circle tolerance of 1e-10.
///
/// Throws InvalidInput for fewer than 3 points, repeated points, or an
/// all-collinear input.
std::vector<std::array<int, 3>> delaunay(std::span<const Point2> points);

}  // namespace scone
