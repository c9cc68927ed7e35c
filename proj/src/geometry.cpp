#include "cstack/geometry.hpp"

#include <algorithm>

namespace cstack {

double orient_value(Point a, Point b, Point c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

int orient(Point a, Point b, Point c) {
  double v = orient_value(a, b, c);
  if (v > kGeomEps) return 1;
  if (v < -kGeomEps) return -1;
  return 0;
}

bool proper_cross(Point a, Point b, Point c, Point d) {
  int o1 = orient(a, b, c);
  int o2 = orient(a, b, d);
  int o3 = orient(c, d, a);
  int o4 = orient(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

bool segments_touch(Point a, Point b, Point c, Point d) {
  if (proper_cross(a, b, c, d)) return true;
  auto on_seg = [](Point p, Point q, Point r) {
    if (orient(p, q, r) != 0) return false;
    return r.x >= std::min(p.x, q.x) - kGeomEps && r.x <= std::max(p.x, q.x) + kGeomEps &&
           r.y >= std::min(p.y, q.y) - kGeomEps && r.y <= std::max(p.y, q.y) + kGeomEps;
  };
  return on_seg(a, b, c) || on_seg(a, b, d) || on_seg(c, d, a) || on_seg(c, d, b);
}

RayHit ray_segment(Point origin, Point dir, Point a, Point b) {
  RayHit out;
  Point far = origin + dir;
  double sa = orient_value(origin, far, a);
  double sb = orient_value(origin, far, b);
  // Tie rule: points on the ray line belong to its counterclockwise side.
  int ia = sa > kGeomEps ? 1 : (sa < -kGeomEps ? -1 : 1);
  int ib = sb > kGeomEps ? 1 : (sb < -kGeomEps ? -1 : 1);
  if (ia == ib) return out;
  double denom = cross(dir, b - a);
  if (std::abs(denom) < 1e-18) return out;
  double t = cross(a - origin, b - a) / denom;
  if (t < -kGeomEps) return out;
  double s = cross(a - origin, dir) / denom;
  if (s < -kGeomEps || s > 1.0 + kGeomEps) return out;
  out.hit = true;
  out.t = t;
  out.point = origin + scale(dir, t);
  return out;
}

double polygon_area2(const std::vector<Point>& poly) {
  double a = 0.0;
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    size_t j = (i + 1) % n;
    a += poly[i].x * poly[j].y - poly[j].x * poly[i].y;
  }
  return a;
}

bool is_simple_polygon(const std::vector<Point>& poly) {
  size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    size_t i2 = (i + 1) % n;
    for (size_t j = i + 1; j < n; ++j) {
      size_t j2 = (j + 1) % n;
      bool adjacent = i2 == j || j2 == i || i == j;
      if (adjacent) continue;
      if (segments_touch(poly[i], poly[i2], poly[j], poly[j2])) return false;
    }
  }
  return true;
}

bool point_in_polygon(const std::vector<Point>& poly, Point p) {
  size_t n = poly.size();
  bool inside = false;
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    Point a = poly[j], b = poly[i];
    if ((b.y > p.y) != (a.y > p.y)) {
      double xint = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

bool is_x_monotone(const std::vector<Point>& poly) {
  size_t n = poly.size();
  if (n < 3) return false;
  int changes = 0;
  for (size_t i = 0; i < n; ++i) {
    double a = poly[i].x;
    double b = poly[(i + 1) % n].x;
    double c = poly[(i + 2) % n].x;
    if ((b - a) * (c - b) < 0) ++changes;
  }
  return changes <= 2;
}

std::vector<int> gift_wrap(const std::vector<Point>& pts) {
  int n = static_cast<int>(pts.size());
  std::vector<int> hull;
  if (n == 0) return hull;
  int start = 0;
  for (int i = 1; i < n; ++i) {
    if (pts[i].y < pts[start].y - kGeomEps ||
        (std::abs(pts[i].y - pts[start].y) <= kGeomEps && pts[i].x < pts[start].x))
      start = i;
  }
  int cur = start;
  do {
    hull.push_back(cur);
    int next = -1;
    for (int i = 0; i < n; ++i) {
      if (i == cur) continue;
      if (next < 0) {
        next = i;
        continue;
      }
      int o = orient(pts[cur], pts[next], pts[i]);
      if (o < 0 || (o == 0 && dist2(pts[cur], pts[i]) > dist2(pts[cur], pts[next]))) next = i;
    }
    cur = next;
  } while (cur != start && static_cast<int>(hull.size()) <= n);
  return hull;
}

bool is_convex_ccw(const std::vector<Point>& poly) {
  size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    if (orient(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]) <= 0) return false;
  }
  return true;
}

}  // namespace cstack
