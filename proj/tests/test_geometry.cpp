#include <algorithm>
#include <sstream>

#include "cstack/hull.hpp"
#include "cstack/io.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cstack;
using namespace cstack::test;

namespace {

std::vector<Point> square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

// The stack is a convex left-turning chain from the start vertex at every
// step, and the run ends with exactly the polygon's hull on it.
void hull_stack_invariant(const std::vector<Point>& poly) {
  Metrics m;
  VectorAccessor base(poly, &m);
  auto order = hull_scan_order(poly);
  RemapAccessor in(base, order);
  HullContract alg;
  PlainStack stack(&m);
  NullSink sink;
  Driver d(alg, in, stack, sink, nullptr);
  d.start();
  while (!d.done()) {
    d.step();
    const auto& items = stack.items();
    CHECK(items.front().elem.index == 1);
    for (size_t i = 2; i < items.size(); ++i)
      CHECK(orient(items[i - 2].elem.value, items[i - 1].elem.value, items[i].elem.value) > 0);
  }
  auto hull = gift_wrap(poly);
  REQUIRE(stack.size() == static_cast<Index>(hull.size()));
  for (size_t i = 0; i < hull.size(); ++i) {
    Index rotated = stack.items()[i].elem.index;
    CHECK(order[static_cast<size_t>(rotated - 1)] == static_cast<Index>(hull[i]) + 1);
  }
}

std::vector<Index> giftwrap_hull_indices(const std::vector<Point>& poly) {
  auto hull = gift_wrap(poly);
  std::vector<Index> out;
  for (int h : hull) out.push_back(static_cast<Index>(h) + 1);
  return out;
}

}  // namespace

TEST_CASE("orientation and crossing predicates") {
  CHECK(orient({0, 0}, {1, 0}, {0, 1}) == 1);
  CHECK(orient({0, 0}, {0, 1}, {1, 0}) == -1);
  CHECK(orient({0, 0}, {1, 1}, {2, 2}) == 0);
  CHECK(proper_cross({0, 0}, {2, 2}, {0, 2}, {2, 0}));
  CHECK(!proper_cross({0, 0}, {1, 1}, {2, 2}, {3, 1}));

  RayHit h = ray_segment({0.5, 0.5}, {1, 0}, {1, 0}, {1, 1});
  REQUIRE(h.hit);
  CHECK(h.point.x == doctest::Approx(1.0));
  CHECK(h.point.y == doctest::Approx(0.5));
}

TEST_CASE("generated polygons are valid") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto star = gen_star_polygon(40, seed);
    CHECK(polygon_area2(star) > 0);
    CHECK(is_simple_polygon(star));

    auto mono = gen_monotone_polygon(40, seed);
    CHECK(polygon_area2(mono) > 0);
    CHECK(is_simple_polygon(mono));
    CHECK(is_x_monotone(mono));

    Point q = gen_interior_point(star, seed);
    CHECK(point_in_polygon(star, q));
  }
  auto tri = gen_star_polygon(3, 7);
  CHECK(tri.size() == 3);
  CHECK(is_simple_polygon(tri));
}

TEST_CASE("polygon file format round-trips") {
  PolygonInput in;
  in.vertices = gen_star_polygon(12, 5);
  in.has_query = true;
  in.query = gen_interior_point(in.vertices, 5);
  std::stringstream ss;
  write_polygon(ss, in);
  PolygonInput back = read_polygon(ss);
  REQUIRE(back.vertices.size() == in.vertices.size());
  CHECK(back.has_query);
  CHECK(back.query.x == in.query.x);
  for (size_t i = 0; i < in.vertices.size(); ++i) {
    CHECK(back.vertices[i].x == in.vertices[i].x);
    CHECK(back.vertices[i].y == in.vertices[i].y);
  }
}

TEST_CASE("find_bridge spec shapes") {
  Metrics m;
  // Convex chain: the farthest crossing edge is already the hull edge.
  std::vector<Point> convex = {{0, 0}, {1, 2}, {3, 3}, {5, 2}, {6, 0}};
  VectorAccessor in(convex, &m);
  ChainView view{&in, 1, 5, false, {}};
  BridgeResult br = find_bridge(view, {2.5, 0.1}, {0, 1});
  CHECK(view.input_index(br.u) == 2);
  CHECK(view.input_index(br.v) == 3);

  // One dominated candidate: the reflex dip hides the true hull edge.
  std::vector<Point> dip = {{0, 0}, {2, 3}, {3, 0.5}, {4, 3}, {6, 0}};
  VectorAccessor in2(dip, &m);
  ChainView view2{&in2, 1, 5, false, {}};
  BridgeResult br2 = find_bridge(view2, {3.0, 0.1}, {0, 1});
  CHECK(view2.input_index(br2.u) == 2);
  CHECK(view2.input_index(br2.v) == 4);

  // Ray aimed straight through a vertex: the tie rule (on-ray counts as the
  // counterclockwise side) resolves the crossing edge deterministically.
  BridgeResult br3 = find_bridge(view2, {3.0, 0.1}, {-1.0, 2.9});
  CHECK(view2.input_index(br3.u) == 2);
  CHECK(view2.input_index(br3.v) == 4);

  CHECK_THROWS_AS(find_bridge(view, {3.0, 0.1}, {0, -1}), NoCrossing);
}

TEST_CASE("hull stack equals the prefix hull at every step") {
  hull_stack_invariant(square());
  hull_stack_invariant({{0, 0}, {4, 0}, {4, 4}, {2, 1}, {0, 4}});
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    hull_stack_invariant(gen_star_polygon(24, seed));
    hull_stack_invariant(gen_star_polygon(61, seed + 100));
    hull_stack_invariant(gen_monotone_polygon(30, seed));
  }
}

TEST_CASE("convex hull matches the gift-wrap oracle") {
  SUBCASE("triangle is its own hull") {
    auto run = convex_hull(gen_star_polygon(3, 2), EngineConfig::plain(), 1);
    CHECK(run.hull_indices.size() == 3);
  }
  SUBCASE("documented five-vertex example") {
    std::vector<Point> poly = {{0, 0}, {4, 0}, {4, 4}, {2, 1}, {0, 4}};
    auto run = convex_hull(poly, EngineConfig::plain(), 1);
    std::vector<Index> expect = {1, 2, 3, 5};
    CHECK(run.hull_indices == expect);
  }
  SUBCASE("convex polygon keeps every vertex with zero pops") {
    std::vector<Point> poly;
    for (int i = 0; i < 12; ++i) {
      double th = 2 * 3.14159265358979 * i / 12;
      poly.push_back({10 * std::cos(th), 10 * std::sin(th)});
    }
    auto run = convex_hull(poly, EngineConfig::plain(), 1);
    CHECK(run.hull_indices.size() == 12);
  }
  SUBCASE("random stars and monotone polygons") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      for (int n : {8, 33, 64}) {
        auto poly = gen_star_polygon(n, seed * 13);
        auto run = convex_hull(poly, EngineConfig::plain(), seed);
        CHECK(run.hull_indices == giftwrap_hull_indices(poly));
        auto mono = gen_monotone_polygon(n, seed * 17);
        auto run2 = convex_hull(mono, EngineConfig::plain(), seed);
        CHECK(run2.hull_indices == giftwrap_hull_indices(mono));
      }
    }
  }
}

TEST_CASE("hull output is engine independent") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    int n = 24 + static_cast<int>(seed) * 9;
    auto poly = gen_star_polygon(n, seed * 31);
    auto plain = convex_hull(poly, EngineConfig::plain(), seed);
    CHECK(is_convex_ccw(plain.hull_points));
    for (const Point& p : poly) {
      bool inside_or_on = true;
      size_t h = plain.hull_points.size();
      for (size_t i = 0; i < h; ++i)
        if (orient(plain.hull_points[i], plain.hull_points[(i + 1) % h], p) < 0) inside_or_on = false;
      CHECK(inside_or_on);
    }
    for (Index p : {Index{2}, Index{4},
                    static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n))))}) {
      auto run = convex_hull(poly, EngineConfig::compressed(p), seed);
      CHECK(run.hull_indices == plain.hull_indices);
      CHECK(run.metrics.output_hash == plain.metrics.output_hash);
    }
    for (int s : {2, ceil_log2(n)}) {
      auto run = convex_hull(poly, EngineConfig::green(s), seed);
      CHECK(run.hull_indices == plain.hull_indices);
      CHECK(run.metrics.output_hash == plain.metrics.output_hash);
    }
    if (n >= 16) {
      auto run = convex_hull(poly, EngineConfig::hybrid(0.5), seed);
      CHECK(run.hull_indices == plain.hull_indices);
      CHECK(run.metrics.output_hash == plain.metrics.output_hash);
    }
  }
}

TEST_CASE("hull lp answers match the plain-stack simulation") {
  HullContract alg;
  long long total_checks = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (int n : {16, 33, 64}) {
      auto poly = gen_star_polygon(n, seed * 7 + 3);
      Metrics mg, mp;
      VectorAccessor bg(poly, &mg), bp(poly, &mp);
      auto order = hull_scan_order(poly);
      RemapAccessor ing(bg, order), inp(bp, order);

      FoldOracle inner(alg);
      LockstepOracle oracle(inner, alg, ing);
      (void)seed;
      VecSink sg, sp;
      GreenStack green(n, 2, alg, ing, mg, oracle);
      PlainStack plain(&mp);
      Driver dg(alg, ing, green, sg, nullptr);
      Driver dp(alg, inp, plain, sp, nullptr);
      dg.start();
      dp.start();
      oracle.live = &dp.live_ctx();
      while (!dp.done()) {
        oracle.shadow = plain.items();
        dg.step();
        dp.step();
      }
      oracle.checking = false;
      dg.drain();
      dp.drain();
      CHECK(same_emits(sg.records, sp.records));
      CHECK(oracle.mismatches == 0);
      total_checks += oracle.checks;
    }
  }
  CHECK(total_checks > 200);  // the runs actually exercised the oracle
}

TEST_CASE("degenerate input raises") {
  std::vector<Point> collinear = {{0, 0}, {2, 0}, {4, 0}, {4, 4}};
  CHECK_THROWS_AS(convex_hull(collinear, EngineConfig::plain(), 1), DegenerateInput);
  std::vector<Point> cw = {{0, 0}, {0, 4}, {4, 4}, {4, 0}};
  CHECK_THROWS_AS(convex_hull(cw, EngineConfig::plain(), 1), BadParameter);
}
