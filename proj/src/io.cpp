#include "cstack/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cstack/rng.hpp"

namespace cstack {

std::vector<Point> gen_star_polygon(Index n, std::uint64_t seed) {
  if (n < 3) throw BadParameter("gen: polygon needs n >= 3");
  Rng rng(derive_seed(seed, 1));
  std::vector<Point> poly;
  poly.reserve(static_cast<size_t>(n));
  double two_pi = 8.0 * std::atan(1.0);
  for (Index i = 0; i < n; ++i) {
    double theta = two_pi * (static_cast<double>(i) + 0.2 + 0.6 * rng.next_double()) /
                   static_cast<double>(n);
    double r = rng.next_in(1.0, 10.0);
    poly.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return poly;
}

std::vector<Point> gen_monotone_polygon(Index n, std::uint64_t seed) {
  if (n < 3) throw BadParameter("gen: polygon needs n >= 3");
  Rng rng(derive_seed(seed, 2));
  std::vector<double> xs(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i)
    xs[static_cast<size_t>(i)] = static_cast<double>(i) + rng.next_in(0.05, 0.95);

  std::vector<Point> lower, upper;
  lower.push_back({xs.front(), rng.next_in(-0.4, 0.4)});
  for (Index i = 1; i + 1 < n; ++i) {
    double x = xs[static_cast<size_t>(i)];
    if (rng.next_range(0, 1) == 0 || (lower.size() < 2 && upper.size() + lower.size() + 2 >=
                                          static_cast<size_t>(n) - 1))
      lower.push_back({x, rng.next_in(-6.0, -0.8)});
    else
      upper.push_back({x, rng.next_in(0.8, 6.0)});
  }
  Point right{xs.back(), rng.next_in(-0.4, 0.4)};

  std::vector<Point> poly;
  poly.reserve(static_cast<size_t>(n));
  for (const Point& p : lower) poly.push_back(p);
  poly.push_back(right);
  for (auto it = upper.rbegin(); it != upper.rend(); ++it) poly.push_back(*it);
  return poly;
}

std::vector<double> gen_signal(Index n, std::uint64_t seed) {
  if (n < 1) throw BadParameter("gen: signal needs n >= 1");
  Rng rng(derive_seed(seed, 3));
  std::vector<double> v(static_cast<size_t>(n));
  double x = 0.0;
  for (Index i = 0; i < n; ++i) {
    x += rng.next_in(-1.0, 1.0);
    v[static_cast<size_t>(i)] = x;
  }
  return v;
}

Point gen_interior_point(const std::vector<Point>& poly, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 4));
  double xmin = poly[0].x, xmax = poly[0].x, ymin = poly[0].y, ymax = poly[0].y;
  for (const Point& p : poly) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  double margin = 1e-3 * (xmax - xmin + ymax - ymin);
  for (int tries = 0; tries < 100000; ++tries) {
    Point q{rng.next_in(xmin, xmax), rng.next_in(ymin, ymax)};
    if (!point_in_polygon(poly, q)) continue;
    double d2min = 1e300;
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
      Point a = poly[i], b = poly[(i + 1) % n];
      Point ab = b - a;
      double t = std::clamp(dot(q - a, ab) / dot(ab, ab), 0.0, 1.0);
      d2min = std::min(d2min, dist2(q, a + scale(ab, t)));
    }
    if (d2min > margin * margin) return q;
  }
  throw BadParameter("gen: failed to place an interior point");
}

void write_polygon(std::ostream& os, const PolygonInput& poly) {
  os.precision(17);
  if (poly.has_query) os << "q: " << poly.query.x << " " << poly.query.y << "\n";
  os << poly.vertices.size() << "\n";
  for (const Point& p : poly.vertices) os << p.x << " " << p.y << "\n";
}

PolygonInput read_polygon(std::istream& is) {
  PolygonInput out;
  std::string tok;
  if (!(is >> tok)) throw BadParameter("polygon file: empty");
  if (tok == "q:") {
    out.has_query = true;
    if (!(is >> out.query.x >> out.query.y)) throw BadParameter("polygon file: bad query point");
    if (!(is >> tok)) throw BadParameter("polygon file: missing vertex count");
  }
  long long n = 0;
  try {
    n = std::stoll(tok);
  } catch (...) {
    throw BadParameter("polygon file: bad vertex count");
  }
  if (n < 3) throw BadParameter("polygon file: need at least 3 vertices");
  out.vertices.resize(static_cast<size_t>(n));
  for (auto& p : out.vertices)
    if (!(is >> p.x >> p.y)) throw BadParameter("polygon file: truncated vertex list");
  return out;
}

void write_signal(std::ostream& os, const std::vector<double>& values) {
  os.precision(17);
  os << values.size() << "\n";
  for (double v : values) os << v << "\n";
}

std::vector<double> read_signal(std::istream& is) {
  long long n = 0;
  if (!(is >> n) || n < 1) throw BadParameter("signal file: bad length");
  std::vector<double> out(static_cast<size_t>(n));
  for (auto& v : out)
    if (!(is >> v)) throw BadParameter("signal file: truncated values");
  return out;
}

PolygonInput load_polygon_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw BadParameter("cannot open input file: " + path);
  return read_polygon(f);
}

std::vector<double> load_signal_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw BadParameter("cannot open input file: " + path);
  return read_signal(f);
}

void save_polygon_file(const std::string& path, const PolygonInput& poly) {
  std::ofstream f(path);
  if (!f) throw BadParameter("cannot open output file: " + path);
  write_polygon(f, poly);
}

void save_signal_file(const std::string& path, const std::vector<double>& values) {
  std::ofstream f(path);
  if (!f) throw BadParameter("cannot open output file: " + path);
  write_signal(f, values);
}

}  // namespace cstack
