#include "cstack/green_stack.hpp"

#include <algorithm>

#include "cstack/driver.hpp"

namespace cstack {

namespace {
constexpr Index kExplicitLimit = 4;  // bottom blocks at most this long are stored in full
}

GreenStack::GreenStack(Index n, int s, StackAlgorithmContract& alg, const InputAccessor& in,
                       Metrics& metrics, NeighborOracle& oracle)
    : alg_(alg), in_(in), metrics_(metrics), oracle_(oracle), k_(alg.top_visibility()) {
  if (n < 1) throw BadParameter("green stack: empty input");
  int smax = ceil_log2(n) > 0 ? ceil_log2(n) : 1;
  if (s < 1 || s > smax) throw BadParameter("green stack: require 1 <= s <= ceil(log2 n)");
  part_ = Partition(n, std::vector<Index>(static_cast<size_t>(s), 2));
  Index bottom_len = n;
  for (int i = 0; i < s; ++i) bottom_len = (bottom_len + 1) / 2;
  explicit_bottom_ = bottom_len <= kExplicitLimit;
  levels_.resize(static_cast<size_t>(s));
}

GreenStack::~GreenStack() { metrics_.cells.post(-cells_); }

void GreenStack::drop(int level, bool fir) {
  auto& o = fir ? levels_[level - 1].fir : levels_[level - 1].nex;
  if (o) {
    post(-o->cells());
    o.reset();
  }
}

GreenStack::GBlock GreenStack::make_gblock(int level, Span s, const StackEntry& e) {
  GBlock b;
  b.span = s;
  b.first = e;
  b.last = e;
  if (level == part_.levels() && explicit_bottom_) {
    b.explicit_items = true;
    b.items.push_back(e);
  }
  return b;
}

void GreenStack::push(const StackEntry& e) {
  Index i = e.elem.index;
  if (i < 1 || i > part_.n()) throw OrderViolation("green push: index outside input");
  if (top_index_ != 0 && i <= top_index_)
    throw OrderViolation("green push: index not above current top");

  Span s{1, part_.n()};
  for (int gl = 1; gl <= part_.levels(); ++gl) {
    s = split_step(s, 2, i);
    GLevel& lv = levels_[gl - 1];
    if (lv.fir && lv.fir->span.lo == s.lo) {
      GBlock& b = *lv.fir;
      long long before = b.cells();
      b.last = e;
      if (b.explicit_items) b.items.push_back(e);
      post(b.cells() - before);
    } else {
      if (lv.fir) {
        if (lv.nex && gl == 1)
          throw OrderViolation("green push: top level cannot rotate twice");
        drop(gl, false);
        lv.nex = std::move(lv.fir);
        lv.fir.reset();
      }
      lv.fir = make_gblock(gl, s, e);
      post(lv.fir->cells());
    }
  }
  if (size_known_) ++size_;
  top_index_ = i;
}

StackEntry GreenStack::pop() {
  throw Error("green stack: single pop unsupported (pops flow through mass_pop)");
}

GreenStack::GBlock* GreenStack::top_block(int* level_out, bool* is_fir_out) {
  for (int gl = part_.levels(); gl >= 1; --gl) {
    for (bool f : {true, false}) {
      GBlock* b = slot(gl, f);
      if (b) {
        if (level_out) *level_out = gl;
        if (is_fir_out) *is_fir_out = f;
        return b;
      }
    }
  }
  return nullptr;
}

const GreenStack::GBlock* GreenStack::top_block_const() const {
  return const_cast<GreenStack*>(this)->top_block();
}

const StackEntry* GreenStack::top_entry() const {
  const GBlock* b = top_block_const();
  if (!b) return nullptr;
  if (b->explicit_items) return b->items.empty() ? nullptr : &b->items.back();
  return &b->last;
}

bool GreenStack::empty() const {
  const GLevel& l1 = levels_.front();
  return !l1.fir && !l1.nex;
}

// Every block whose recorded top lies above the new top lost that element:
// it either still has elements at or below the new top (then the new top is
// its top, since block elements are contiguous in the stack) or it drained.
void GreenStack::retarget_all(const StackEntry& new_top, bool count_m_a) {
  Index v = new_top.elem.index;
  for (int gl = 1; gl <= part_.levels(); ++gl) {
    for (bool f : {true, false}) {
      GBlock* b = slot(gl, f);
      if (!b || b->last.elem.index <= v) continue;
      if (b->first.elem.index > v) {
        if (count_m_a) metrics_.sum_m_a += b->last.elem.index - b->first.elem.index + 1;
        drop(gl, f);
        continue;
      }
      long long before = b->cells();
      if (b->explicit_items) {
        while (!b->items.empty() && b->items.back().elem.index > v) b->items.pop_back();
        if (b->items.empty()) throw OracleInconsistency("green: explicit block lost its floor");
        b->last = b->items.back();
      } else {
        b->last = new_top;
      }
      post(b->cells() - before);
    }
  }
}

void GreenStack::rebuild_chain(const StackEntry& survivor, int level, const InputAccessor& in) {
  GBlock* parent = nullptr;
  for (bool f : {true, false}) {
    GBlock* b = slot(level, f);
    if (b && b->last.elem.index == survivor.elem.index) {
      parent = b;
      break;
    }
  }
  if (!parent) throw OracleInconsistency("green: lost the survivor block");
  for (int gl = level + 1; gl <= part_.levels(); ++gl) {
    Span hs = part_.block_span(gl, survivor.elem.index);
    StackEntry first;
    if (hs.contains(parent->first.elem.index)) {
      first = parent->first;
    } else {
      NeighborResult r = call_lp(oracle_, survivor.elem, nullptr, survivor, parent->first, hs.lo - 1, in,
                                 metrics_);
      if (!r.upper.present)
        throw OracleInconsistency("green: no first element inside a nonempty block");
      first = r.upper.entry;
    }
    GBlock nb;
    nb.span = hs;
    nb.first = first;
    nb.last = survivor;
    if (gl == part_.levels() && explicit_bottom_) {
      nb.explicit_items = true;
      rebuild_explicit_items(nb, in);
    }
    drop(gl, false);
    drop(gl, true);
    levels_[gl - 1].nex = std::move(nb);
    post(levels_[gl - 1].nex->cells());
    parent = &*levels_[gl - 1].nex;
  }
}

void GreenStack::rebuild_explicit_items(GBlock& b, const InputAccessor& in) {
  // Tiny block: enumerate it top-down with predecessor queries, then flip.
  b.items.clear();
  StackEntry cur = b.last;
  b.items.push_back(cur);
  while (cur.elem.index != b.first.elem.index) {
    NeighborResult r =
        call_lp(oracle_, b.last.elem, nullptr, b.last, b.first, cur.elem.index - 1, in, metrics_);
    if (!r.lower.present)
      throw OracleInconsistency("green: predecessor missing inside a block");
    cur = r.lower.entry;
    b.items.push_back(cur);
  }
  std::reverse(b.items.begin(), b.items.end());
}

void GreenStack::mass_pop(const InputElement& a_c, Context& live, StackAlgorithmContract& alg,
                          const InputAccessor& in, Sink& sink, Trace* trace) {
  if (top_index_ == 0) return;

  // Phase 1: the explicit bottom blocks pop element by element, conditions
  // consulted as in the plain scheme.
  bool did_micro = false;
  Index micro_floor = part_.n() + 1;  // smallest index popped explicitly
  while (true) {
    int blevel = 0;
    bool bfir = false;
    GBlock* b = top_block(&blevel, &bfir);
    if (!b || !b->explicit_items) break;
    TopWindow w = window(in, k_);
    if (!alg.pop_condition(a_c, live, w)) break;
    Index width = b->last.elem.index - b->first.elem.index + 1;
    StackEntry popped = b->items.back();
    b->items.pop_back();
    did_micro = true;
    micro_floor = popped.elem.index;
    if (size_known_) --size_;
    if (trace) trace->pop(popped.elem.index);
    if (b->items.empty()) {
      metrics_.sum_m_a += width;
      drop(blevel, bfir);
    } else {
      long long before = b->cells() + entry_cells(popped);
      b->last = b->items.back();
      post(b->cells() - before);
    }
    TopWindow after = window_below(popped, in, k_);
    alg.on_pop(a_c, popped, live, after, sink);
  }

  {
    int lvl = 0;
    GBlock* tb = top_block(&lvl);
    if (!tb) {
      top_index_ = 0;
      return;
    }
    if (tb->explicit_items) {
      // The micro loop only stops on an explicit top when the condition went
      // false; the top is exact, so retarget the coarser levels and leave.
      StackEntry t = tb->items.back();
      if (did_micro) {
        retarget_all(t, true);
        rebuild_chain(t, lvl, in);
        top_index_ = t.elem.index;
      }
      return;
    }
    // Compressed top: its recorded boundary may be stale after micro pops,
    // and the condition cannot be trusted against it. The oracle cascade
    // resolves the true survivor either way.
  }

  // Phase 2: cascade over the compressed blocks, deepest first. One oracle
  // call per candidate block; destroyed blocks are only measured. The first
  // candidate is always a block whose recorded top is the pre-pop top of the
  // whole stack, which anchors the enumeration replay.
  StackEntry old_top;
  bool have_old_top = false;
  StackEntry bottom0;
  bool have_bottom0 = false;
  if (alg.needs_pop_enumeration() && !empty()) {
    bottom0 = bottom_entry();
    have_bottom0 = true;
  }
  for (int gl = part_.levels(); gl >= 1; --gl) {
    for (bool f : {true, false}) {
      GBlock* b = slot(gl, f);
      if (!b) continue;
      if (!have_old_top) {
        old_top = b->last;
        have_old_top = true;
      }
      NeighborResult r =
          call_lp(oracle_, a_c, &live, b->last, b->first, b->last.elem.index, in, metrics_);
      if (!r.lower.present) {
        metrics_.sum_m_a += b->last.elem.index - b->first.elem.index + 1;
        drop(gl, f);
        continue;
      }
      StackEntry survivor = r.lower.entry;
      if (alg.needs_pop_enumeration())
        enumerate_jumped_pops(a_c, survivor, old_top, micro_floor, live, alg, in, sink, trace);
      size_known_ = false;
      if (b->explicit_items) throw OracleInconsistency("green: cascade reached an explicit block");
      retarget_all(survivor, true);
      int slevel = 0;
      for (int g2 = part_.levels(); g2 >= 1 && !slevel; --g2)
        for (bool f2 : {true, false}) {
          GBlock* b2 = slot(g2, f2);
          if (b2 && b2->last.elem.index == survivor.elem.index) {
            slevel = g2;
            break;
          }
        }
      if (!slevel) throw OracleInconsistency("green: survivor block vanished");
      rebuild_chain(survivor, slevel, in);
      top_index_ = survivor.elem.index;
      return;
    }
  }
  // a_c emptied the whole stack.
  if (have_old_top && have_bottom0)
    enumerate_jumped_pops(a_c, bottom0, old_top, micro_floor, live, alg, in, sink, trace, true);
  for (int gl = 1; gl <= part_.levels(); ++gl) {
    drop(gl, true);
    drop(gl, false);
  }
  size_ = 0;
  size_known_ = true;
  top_index_ = 0;
}

StackEntry GreenStack::bottom_entry() const {
  const GLevel& l1 = levels_.front();
  if (l1.nex) return l1.nex->explicit_items ? l1.nex->items.front() : l1.nex->first;
  if (l1.fir) return l1.fir->explicit_items ? l1.fir->items.front() : l1.fir->first;
  throw EmptyStack("green stack: empty");
}

void GreenStack::enumerate_jumped_pops(const InputElement& a_c, const StackEntry& survivor,
                                       const StackEntry& old_top, Index micro_floor, Context& live,
                                       StackAlgorithmContract& alg, const InputAccessor& in,
                                       Sink& sink, Trace* trace, bool pop_survivor_too) {
  // Local replay of the doomed span, only to drive on_pop. The auxiliary
  // stack is plain; its cells are accounted like any other workspace.
  PlainStack aux(&metrics_);
  aux.push(survivor);
  NullSink null;
  Driver d(alg, in, aux, null, nullptr);
  d.seed(survivor);
  while (aux.top_index() != old_top.elem.index) {
    if (d.done()) throw ReplayDivergence("green enumeration: input exhausted");
    ++metrics_.replayed_elements;
    d.step();
  }
  while (!aux.empty() && (pop_survivor_too || aux.top_index() != survivor.elem.index)) {
    StackEntry popped = aux.pop();
    if (popped.elem.index >= micro_floor) continue;  // already popped explicitly
    if (trace) trace->pop(popped.elem.index);
    TopWindow after = window_below(popped, in, alg.top_visibility());
    alg.on_pop(a_c, popped, live, after, sink);
  }
}

StackEntry GreenStack::remove_top_one(const InputAccessor& in) {
  const StackEntry* tp = top_entry();
  if (!tp) throw EmptyStack("green stack: empty");
  StackEntry t = *tp;

  // Predecessor of the top, before anything moves. The deepest block whose
  // first element lies below the top bounds the query window.
  StackEntry pred;
  bool have_pred = false;
  {
    int blevel = 0;
    bool bfir = false;
    GBlock* b = top_block(&blevel, &bfir);
    if (b->explicit_items && b->items.size() >= 2) {
      pred = b->items[b->items.size() - 2];
      have_pred = true;
    } else {
      for (int gl = part_.levels(); gl >= 1 && !have_pred; --gl) {
        for (bool f : {true, false}) {
          GBlock* c = slot(gl, f);
          if (!c || c->first.elem.index >= t.elem.index) continue;
          NeighborResult r =
              call_lp(oracle_, InputElement{}, nullptr, t, c->first, t.elem.index - 1, in, metrics_);
          if (!r.lower.present)
            throw OracleInconsistency("green: predecessor missing during drain");
          pred = r.lower.entry;
          have_pred = true;
          break;
        }
      }
    }
  }

  if (size_known_ && size_ > 0) --size_;
  if (!have_pred) {
    for (int gl = 1; gl <= part_.levels(); ++gl) {
      drop(gl, true);
      drop(gl, false);
    }
    top_index_ = 0;
    return t;
  }
  retarget_all(pred, false);
  int dlevel = 0;
  for (int gl = part_.levels(); gl >= 1 && !dlevel; --gl)
    for (bool f : {true, false}) {
      GBlock* b = slot(gl, f);
      if (b && b->last.elem.index == pred.elem.index) {
        dlevel = gl;
        break;
      }
    }
  if (!dlevel) throw OracleInconsistency("green: predecessor lost after removal");
  rebuild_chain(pred, dlevel, in);
  top_index_ = pred.elem.index;
  return t;
}

void GreenStack::drain(const std::function<void(const StackEntry&)>& fn) {
  while (!empty()) {
    StackEntry e = remove_top_one(in_);
    fn(e);
  }
}

}  // namespace cstack
