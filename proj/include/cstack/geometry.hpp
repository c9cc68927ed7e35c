#pragma once

#include <cmath>
#include <vector>

#include "cstack/core.hpp"
#include "cstack/metrics.hpp"

namespace cstack {

using Point = Payload;

constexpr double kGeomEps = 1e-9;

inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point scale(Point a, double s) { return {a.x * s, a.y * s}; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double dist2(Point a, Point b) { return dot(a - b, a - b); }

// Signed area of triangle abc times two. Exact when all coordinates are
// integers small enough for the products to stay exact in doubles.
double orient_value(Point a, Point b, Point c);

// -1 right turn, 0 within tolerance of collinear, +1 left turn.
int orient(Point a, Point b, Point c);

// Strict interior crossing of segments ab and cd.
bool proper_cross(Point a, Point b, Point c, Point d);

// Segments share at least one point (closed test, tolerance-based).
bool segments_touch(Point a, Point b, Point c, Point d);

struct RayHit {
  bool hit = false;
  double t = 0.0;  // parameter along the ray direction
  Point point;
};

// First intersection of ray (origin, dir) with segment ab; points exactly on
// the ray line count as lying on its counterclockwise side (the tie rule).
RayHit ray_segment(Point origin, Point dir, Point a, Point b);

double polygon_area2(const std::vector<Point>& poly);

// O(n^2) simplicity check: no two non-adjacent edges touch.
bool is_simple_polygon(const std::vector<Point>& poly);

bool point_in_polygon(const std::vector<Point>& poly, Point p);

bool is_x_monotone(const std::vector<Point>& poly);

// Independent hull oracle for tests and validation: gift wrapping over a
// point set, counterclockwise starting from the lowest point.
std::vector<int> gift_wrap(const std::vector<Point>& pts);

bool is_convex_ccw(const std::vector<Point>& poly);

}  // namespace cstack
