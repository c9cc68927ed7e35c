#include "cstack/hull.hpp"

#include <algorithm>

namespace cstack {

namespace {

Point pt_of(const TopWindow& t, int i) { return t.top(i)->value; }

int orient_strict(Point a, Point b, Point c) {
  int o = orient(a, b, c);
  if (o == 0) throw DegenerateInput("hull: collinear triple");
  return o;
}

}  // namespace

int HullContract::init(const InputAccessor& in, Context& ctx) {
  if (in.size() < 3) throw BadParameter("hull: need at least 3 vertices");
  Point start = in.at(1);
  ctx.app_resize(8);
  ctx.set_app(kMode, 0.0);
  ctx.set_app(kPrevX, start.x);
  ctx.set_app(kPrevY, start.y);
  ctx.set_app(kLidIdx, 0.0);
  ctx.set_app(kStartX, start.x);
  ctx.set_app(kStartY, start.y);
  return 1;
}

Context HullContract::push_time_app_ctx(Point self, Point start) {
  Context ctx;
  ctx.app_resize(8);
  ctx.set_app(kMode, 0.0);
  ctx.set_app(kPrevX, self.x);
  ctx.set_app(kPrevY, self.y);
  ctx.set_app(kLidIdx, 0.0);
  ctx.set_app(kStartX, start.x);
  ctx.set_app(kStartY, start.y);
  return ctx;
}

bool HullContract::effectively_open(const InputElement& a, const Context& ctx) const {
  if (ctx.app(kMode) == 0.0) return true;
  Point prev{ctx.app(kPrevX), ctx.app(kPrevY)};
  Point lid{ctx.app(kLidX), ctx.app(kLidY)};
  Point start{ctx.app(kStartX), ctx.app(kStartY)};
  return proper_cross(prev, a.value, lid, start);
}

bool HullContract::pop_condition(const InputElement& a, const Context& ctx,
                                 const TopWindow& tops) const {
  if (!tops.top(2)) return false;
  if (!effectively_open(a, ctx)) return false;
  return orient_strict(pt_of(tops, 2), pt_of(tops, 1), a.value) <= 0;
}

bool HullContract::enters_pocket(const InputElement& a, const Context& ctx,
                                 const TopWindow& tops) const {
  if (!tops.top(2)) return false;  // only the start vertex below: nothing to hide behind
  Point start{ctx.app(kStartX), ctx.app(kStartY)};
  return orient_strict(pt_of(tops, 1), start, a.value) > 0;
}

bool HullContract::push_condition(const InputElement& a, const Context& ctx,
                                  const TopWindow& tops) const {
  if (!effectively_open(a, ctx)) return false;
  return !enters_pocket(a, ctx, tops);
}

void HullContract::after_element(const InputElement& a, bool will_push, Context& ctx,
                                 const TopWindow& tops, Sink&) {
  if (effectively_open(a, ctx)) {
    if (!will_push) {
      ctx.set_app(kMode, 1.0);
      ctx.set_app(kLidIdx, static_cast<double>(tops.top(1)->index));
      ctx.set_app(kLidX, pt_of(tops, 1).x);
      ctx.set_app(kLidY, pt_of(tops, 1).y);
    } else {
      ctx.set_app(kMode, 0.0);
      ctx.set_app(kLidIdx, 0.0);
      ctx.set_app(kLidX, 0.0);
      ctx.set_app(kLidY, 0.0);
    }
  }
  ctx.set_app(kPrevX, a.value.x);
  ctx.set_app(kPrevY, a.value.y);
}

void HullContract::report(const StackEntry& top, Sink& sink) {
  EmitRecord r;
  r.tag = kTagHullVertex;
  r.idx = {top.elem.index, 0};
  r.val = {top.elem.value.x, top.elem.value.y};
  sink.emit(r);
}

// ---------------------------------------------------------------------------
// Bridge finding (tandem walk over dominating vertices)

BridgeResult find_bridge(const ChainView& chain, Point origin, Point dir) {
  Index m = chain.size();
  if (m < 2) throw NoCrossing("bridge: chain too short");

  // Starting candidate: the chain edge crossing the ray farthest out.
  Index cu = -1, cv = -1;
  double best_t = -1.0;
  Point prev = chain.at(0);
  for (Index j = 1; j < m; ++j) {
    Point cur = chain.at(j);
    RayHit h = ray_segment(origin, dir, prev, cur);
    if (h.hit && h.t > best_t) {
      best_t = h.t;
      cu = j - 1;
      cv = j;
    }
    prev = cur;
  }
  if (cu < 0) throw NoCrossing("bridge: ray misses the chain");

  int side0 = orient(chain.at(cu), chain.at(cv), origin);
  auto dominates = [&](Index k) {
    int s = orient(chain.at(cu), chain.at(cv), chain.at(k));
    return s != 0 && s == -side0;
  };

  Index iu = cu - 1;
  Index iv = cv + 1;
  bool turn_u = true;
  while (iu >= 0 || iv < m) {
    Index k = -1;
    if (turn_u && iu >= 0) {
      k = iu--;
    } else if (iv < m) {
      k = iv++;
    } else if (iu >= 0) {
      k = iu--;
    }
    turn_u = !turn_u;
    if (k < 0) continue;
    if (!dominates(k)) continue;

    // Replace the candidate by the edge through k that still crosses the ray.
    RayHit hu = ray_segment(origin, dir, chain.at(std::min(k, cu)), chain.at(std::max(k, cu)));
    RayHit hv = ray_segment(origin, dir, chain.at(std::min(k, cv)), chain.at(std::max(k, cv)));
    if (hu.hit) {
      cv = std::max(k, cu);
      cu = std::min(k, cu);
    } else if (hv.hit) {
      cu = std::min(k, cv);
      cv = std::max(k, cv);
    } else {
      throw NoCrossing("bridge: dominating vertex produced no crossing edge");
    }
    side0 = orient(chain.at(cu), chain.at(cv), origin);
    iu = cu - 1;
    iv = cv + 1;
    turn_u = true;
  }
  return {cu, cv};
}

// ---------------------------------------------------------------------------
// Application wrapper

std::vector<Index> hull_scan_order(const std::vector<Point>& poly) {
  Index n = static_cast<Index>(poly.size());
  Index start = 0;
  for (Index i = 1; i < n; ++i) {
    const Point& p = poly[static_cast<size_t>(i)];
    const Point& s = poly[static_cast<size_t>(start)];
    if (p.y < s.y - kGeomEps || (std::abs(p.y - s.y) <= kGeomEps && p.x < s.x)) start = i;
  }
  std::vector<Index> order(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = (start + i) % n + 1;
  return order;
}

HullRun convex_hull(const std::vector<Point>& poly, const EngineConfig& cfg, std::uint64_t seed) {
  if (poly.size() < 3) throw BadParameter("hull: need at least 3 vertices");
  if (polygon_area2(poly) <= 0) throw BadParameter("hull: polygon must be counterclockwise");

  HullRun run;
  VectorAccessor base(poly, &run.metrics);
  std::vector<Index> order = hull_scan_order(poly);
  RemapAccessor in(base, order);

  HullContract alg;
  FoldOracle oracle(alg);
  VecSink collect;
  HashingSink sink(&collect);
  run_with_engine(cfg, alg, in, run.metrics, sink, &oracle);
  run.metrics.output_hash = sink.hash;

  for (auto it = collect.records.rbegin(); it != collect.records.rend(); ++it) {
    if (it->tag != HullContract::kTagHullVertex) continue;
    Index rotated = it->idx[0];
    run.hull_indices.push_back(order[static_cast<size_t>(rotated - 1)]);
    run.hull_points.push_back({it->val[0], it->val[1]});
  }
  return run;
}

}  // namespace cstack
