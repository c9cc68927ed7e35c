#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cstack/geometry.hpp"

namespace cstack {

struct PolygonInput {
  std::vector<Point> vertices;  // counterclockwise
  bool has_query = false;
  Point query;  // visibility viewpoint
};

// Random radii over sorted jittered angles around the origin; simple by
// construction. Deterministic per seed.
std::vector<Point> gen_star_polygon(Index n, std::uint64_t seed);

// Distinct sorted abscissas, interior points split between an upper and a
// lower chain; x-monotone and simple by construction.
std::vector<Point> gen_monotone_polygon(Index n, std::uint64_t seed);

// Random-walk signal values.
std::vector<double> gen_signal(Index n, std::uint64_t seed);

// A point strictly inside the polygon, kept away from edges.
Point gen_interior_point(const std::vector<Point>& poly, std::uint64_t seed);

// Text formats: optional "q: <x> <y>" header, then "<n>" and n lines "<x> <y>".
void write_polygon(std::ostream& os, const PolygonInput& poly);
PolygonInput read_polygon(std::istream& is);

// "<n>" then n value lines.
void write_signal(std::ostream& os, const std::vector<double>& values);
std::vector<double> read_signal(std::istream& is);

PolygonInput load_polygon_file(const std::string& path);
std::vector<double> load_signal_file(const std::string& path);
void save_polygon_file(const std::string& path, const PolygonInput& poly);
void save_signal_file(const std::string& path, const std::vector<double>& values);

}  // namespace cstack
