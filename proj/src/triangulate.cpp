#include "cstack/triangulate.hpp"

#include <algorithm>

namespace cstack {

namespace {

void set_logical(Context& ctx, int base, Index idx, const Payload& p) {
  ctx.set_app_index(base, idx);
  ctx.set_app(base + 1, p.x);
  ctx.set_app(base + 2, p.y);
  ctx.set_app(base + 3, p.tag);
}

Payload payload_at(const Context& ctx, int base) {
  return {ctx.app(base + 1), ctx.app(base + 2), ctx.app(base + 3)};
}

}  // namespace

int TriContract::init(const InputAccessor& in, Context& ctx) {
  if (in.size() < 3) throw BadParameter("triangulate: need at least 3 vertices");
  ctx.app_resize(kAppCells);
  ctx.set_app_index(kNOrig, in.size());
  return 2;  // the two leftmost vertices seed the reflex chain
}

bool TriContract::same_chain(const Payload& a, const Payload& b) {
  return chain_of(a.tag) == chain_of(b.tag);
}

bool TriContract::adjacent(const Payload& a, const Payload& b, Index n_orig) {
  Index d = orig_of(a.tag) - orig_of(b.tag);
  if (d < 0) d = -d;
  return d == 1 || d == n_orig - 1;
}

bool TriContract::diag_inside(const InputElement& a, Point middle, Point next) const {
  int o = orient(next, middle, a.value);
  if (o == 0) throw DegenerateInput("triangulate: collinear triple");
  int code = chain_of(a.value.tag);
  // Lower-chain scans cut ears that bulge downward, upper-chain scans upward;
  // the endpoints flush everything and never reach this test.
  return code == 0 ? o > 0 : o < 0;
}

int TriContract::logical_of(const StackEntry& e, Logical out[3]) {
  int n = 0;
  const Context& c = e.ctx;
  if (c.app_index(kPendOwner) == e.elem.index) {
    int cnt = static_cast<int>(c.app(kPendCount));
    if (cnt > 0) {
      out[n].idx = c.app_index(kPend0);
      out[n].pt = payload_at(c, kPend0);
      ++n;
    }
    if (cnt > 1) {
      out[n].idx = c.app_index(kPend1);
      out[n].pt = payload_at(c, kPend1);
      ++n;
    }
  }
  out[n].idx = e.elem.index;
  out[n].pt = e.elem.value;
  return n + 1;
}

bool TriContract::pop_condition(const InputElement& a, const Context& ctx,
                                const TopWindow& tops) const {
  const InputElement* t1 = tops.top(1);
  if (!t1) return false;

  if (!same_chain(a.value, t1->value)) return true;  // flush across the chains

  bool mid_step = ctx.app_index(kStepOwner) == a.index && ctx.app_index(kLastIdx) != 0;
  if (mid_step) {
    Point middle = {ctx.app(kLastX), ctx.app(kLastY), ctx.app(kLastTag)};
    return diag_inside(a, middle, t1->value);
  }

  // First pop of this element: the top departs only if the walk reaches past
  // it (otherwise the classic scheme would pop and re-push it unchanged).
  if (!tops.top_ctx) throw ContractViolation("triangulate: top context unavailable");
  StackEntry top_entry{*t1, *tops.top_ctx};
  Logical logical[3];
  int m = logical_of(top_entry, logical);
  Point second;
  if (m >= 2) {
    second = logical[m - 2].pt;
  } else {
    const InputElement* t2 = tops.top(2);
    if (!t2) return false;
    second = t2->value;
  }
  return diag_inside(a, t1->value, second);
}

bool TriContract::push_condition(const InputElement&, const Context&, const TopWindow&) const {
  return true;
}

void TriContract::on_pop(const InputElement& a, const StackEntry& popped, Context& ctx,
                         const TopWindow& tops_after, Sink& sink) {
  bool flush = !same_chain(a.value, popped.elem.value);
  bool first = ctx.app_index(kStepOwner) != a.index;
  if (first) {
    ctx.set_app_index(kStepOwner, a.index);
    ctx.set_app_index(kLastIdx, 0);
    ctx.set_app_index(kPendOwner, 0);
    ctx.set_app(kPendCount, 0);
  }

  Logical logical[3];
  int m = logical_of(popped, logical);
  bool bottom_entry = tops_after.top(1) == nullptr;
  Index n_orig = ctx.app_index(kNOrig);

  for (int i = m - 1; i >= 0; --i) {  // top of the entry first
    const Logical& x = logical[i];
    bool have_last = ctx.app_index(kLastIdx) != 0;
    if (!flush && have_last) {
      Point middle = {ctx.app(kLastX), ctx.app(kLastY), ctx.app(kLastTag)};
      if (!diag_inside(a, middle, x.pt)) {
        // The walk stops here: this vertex and anything below it in the entry
        // ride along as carried survivors of the upcoming push.
        ctx.set_app_index(kPendOwner, a.index);
        int cnt = 0;
        for (int j = 0; j <= i && cnt < 2; ++j) {
          set_logical(ctx, cnt == 0 ? kPend0 : kPend1, logical[j].idx, logical[j].pt);
          ++cnt;
        }
        ctx.set_app(kPendCount, cnt);
        return;
      }
    }
    bool skip_diag = !flush && !have_last;  // first consumed: already connected
    if (flush && bottom_entry && i == 0) skip_diag = true;  // boundary edge below
    if (adjacent(a.value, x.pt, n_orig)) skip_diag = true;
    if (!skip_diag) {
      EmitRecord r;
      r.tag = kTagDiagonal;
      r.idx = {a.index, x.idx};
      r.val = {x.pt.x, x.pt.y};
      sink.emit(r);
    }
    ctx.set_app_index(kLastIdx, x.idx);
    ctx.set_app(kLastX, x.pt.x);
    ctx.set_app(kLastY, x.pt.y);
    ctx.set_app(kLastTag, x.pt.tag);
    if (flush && i == m - 1 && ctx.app_index(kPendOwner) != a.index) {
      // The pre-flush top re-enters above the new element.
      ctx.set_app_index(kPendOwner, a.index);
      set_logical(ctx, kPend0, x.idx, x.pt);
      ctx.set_app(kPendCount, 1);
    }
  }
}

void TriContract::after_element(const InputElement& a, bool, Context& ctx, const TopWindow&,
                                Sink&) {
  // A clean pop-free push leaves the old top on the stack, so nothing rides
  // along; stale pending lists from earlier elements are ignored by owner.
  if (ctx.app_index(kStepOwner) != a.index) {
    ctx.set_app_index(kPendOwner, 0);
    ctx.set_app(kPendCount, 0);
  }
  ctx.set_app_index(kStepOwner, 0);
  ctx.set_app_index(kLastIdx, 0);
}

// ---------------------------------------------------------------------------

std::vector<Payload> tri_scan_sequence(const std::vector<Point>& poly) {
  Index n = static_cast<Index>(poly.size());
  if (n < 3) throw BadParameter("triangulate: need at least 3 vertices");
  if (polygon_area2(poly) <= 0) throw BadParameter("triangulate: polygon must be counterclockwise");
  if (!is_x_monotone(poly)) throw NotMonotone("triangulate: polygon is not x-monotone");

  Index left = 0, right = 0;
  for (Index i = 1; i < n; ++i) {
    if (poly[static_cast<size_t>(i)].x < poly[static_cast<size_t>(left)].x) left = i;
    if (poly[static_cast<size_t>(i)].x > poly[static_cast<size_t>(right)].x) right = i;
  }

  // Counterclockwise from the leftmost vertex: the lower chain runs forward
  // to the rightmost vertex, the upper chain comes back.
  std::vector<Payload> lower, upper;
  for (Index i = (left + 1) % n; i != right; i = (i + 1) % n) {
    const Point& p = poly[static_cast<size_t>(i)];
    lower.push_back({p.x, p.y, TriContract::pack_tag(i + 1, 0)});
  }
  for (Index i = (right + 1) % n; i != left; i = (i + 1) % n) {
    const Point& p = poly[static_cast<size_t>(i)];
    upper.push_back({p.x, p.y, TriContract::pack_tag(i + 1, 1)});
  }
  std::reverse(upper.begin(), upper.end());

  std::vector<Payload> out;
  out.reserve(static_cast<size_t>(n));
  out.push_back({poly[static_cast<size_t>(left)].x, poly[static_cast<size_t>(left)].y,
                 TriContract::pack_tag(left + 1, 2)});
  size_t li = 0, ui = 0;
  while (li < lower.size() || ui < upper.size()) {
    bool take_lower;
    if (li == lower.size())
      take_lower = false;
    else if (ui == upper.size())
      take_lower = true;
    else if (lower[li].x == upper[ui].x)
      throw DegenerateInput("triangulate: two vertices share an abscissa");
    else
      take_lower = lower[li].x < upper[ui].x;
    out.push_back(take_lower ? lower[li++] : upper[ui++]);
  }
  out.push_back({poly[static_cast<size_t>(right)].x, poly[static_cast<size_t>(right)].y,
                 TriContract::pack_tag(right + 1, 3)});
  return out;
}

TriRun triangulate_monotone(const std::vector<Point>& poly, const EngineConfig& cfg,
                            std::uint64_t seed) {
  (void)seed;
  TriRun run;
  std::vector<Payload> seq = tri_scan_sequence(poly);
  VectorAccessor in(seq, &run.metrics);

  TriContract alg;
  FoldOracle oracle(alg);
  VecSink collect;
  HashingSink sink(&collect);
  run_with_engine(cfg, alg, in, run.metrics, sink, &oracle);
  run.metrics.output_hash = sink.hash;

  for (const EmitRecord& r : collect.records) {
    if (r.tag != TriContract::kTagDiagonal) continue;
    Index a_orig = TriContract::orig_of(seq[static_cast<size_t>(r.idx[0] - 1)].tag);
    Index b_orig = TriContract::orig_of(seq[static_cast<size_t>(r.idx[1] - 1)].tag);
    run.diagonals.emplace_back(a_orig, b_orig);
  }
  return run;
}

}  // namespace cstack
