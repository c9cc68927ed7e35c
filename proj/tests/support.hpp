#pragma once

#include <functional>
#include <vector>

#include "cstack/engine.hpp"
#include "cstack/nsv.hpp"
#include "cstack/rng.hpp"

namespace cstack::test {

inline std::vector<Payload> scalars(const std::vector<double>& v) {
  std::vector<Payload> p;
  p.reserve(v.size());
  for (double x : v) p.push_back({x, 0.0});
  return p;
}

// Independent left-scan oracle: nearest smaller value to the left, 0 if none.
inline std::vector<Index> nsv_brute(const std::vector<double>& v) {
  std::vector<Index> out(v.size(), 0);
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i; j-- > 0;)
      if (v[j] < v[i]) {
        out[i] = static_cast<Index>(j + 1);
        break;
      }
  return out;
}

// Values realizing a prescribed pop-count sequence under the NSV contract:
// element i pops exactly pops[i] elements (pops[i] <= stack size before it).
inline std::vector<double> nsv_input_for_pattern(const std::vector<int>& pops) {
  std::vector<double> vals;
  std::vector<double> stack;
  for (int c : pops) {
    double v;
    if (c == 0) {
      v = stack.empty() ? 1000.0 : stack.back() + 1000.0;
    } else {
      double below = (static_cast<int>(stack.size()) == c) ? -1e9 : stack[stack.size() - c - 1];
      double at = stack[stack.size() - c];
      v = (below + at) / 2.0;
      stack.resize(stack.size() - c);
    }
    stack.push_back(v);
    vals.push_back(v);
  }
  return vals;
}

// Every pop-count sequence of length n (the reachable keep/pop patterns).
inline void for_each_pop_pattern(int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> pops;
  std::function<void(int, int)> rec = [&](int i, int stack_size) {
    if (i == n) {
      fn(pops);
      return;
    }
    for (int c = 0; c <= stack_size; ++c) {
      pops.push_back(c);
      rec(i + 1, stack_size - c + 1);
      pops.pop_back();
    }
  };
  rec(0, 0);
}

inline std::vector<double> random_walk(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(static_cast<size_t>(n));
  double x = 0.0;
  for (int i = 0; i < n; ++i) {
    x += rng.next_in(-1.0, 1.0);
    v[static_cast<size_t>(i)] = x;
  }
  return v;
}

struct RunOutput {
  Trace trace;
  std::vector<EmitRecord> emits;
  Metrics metrics;
};

inline RunOutput run_one(const EngineConfig& cfg, StackAlgorithmContract& alg,
                         const std::vector<Payload>& data, NeighborOracle* oracle = nullptr) {
  RunOutput out;
  VectorAccessor in(data, &out.metrics);
  VecSink collect;
  HashingSink sink(&collect);
  out.trace = run_with_engine(cfg, alg, in, out.metrics, sink, oracle);
  out.emits = std::move(collect.records);
  out.metrics.output_hash = sink.hash;
  return out;
}

inline bool same_emits(const std::vector<EmitRecord>& a, const std::vector<EmitRecord>& b,
                       double tol = 0.0) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (tol == 0.0 ? !exact_eq(a[i], b[i]) : !tol_eq(a[i], b[i], tol)) return false;
  }
  return true;
}

inline bool same_trace(const Trace& a, const Trace& b) { return a.events == b.events; }

// Fixture with k = 2: pops consult the two topmost elements, the context
// carries a running count, and pops emit records. Exercises the mini-stack
// layering over any provider.
class PairFixture final : public StackAlgorithmContract {
 public:
  static constexpr std::int32_t kTagPop = 7;

  int top_visibility() const override { return 2; }
  bool needs_pop_enumeration() const override { return true; }

  int init(const InputAccessor&, Context& ctx) override {
    ctx.app_resize(1);
    ctx.set_app(0, 0.0);
    return 0;
  }

  bool pop_condition(const InputElement& a, const Context&, const TopWindow& t) const override {
    const InputElement* t1 = t.top(1);
    if (!t1) return false;
    const InputElement* t2 = t.top(2);
    double gate = t1->value.x + (t2 ? 0.25 * t2->value.x : 0.0);
    return gate >= a.value.x;
  }

  bool push_condition(const InputElement&, const Context&, const TopWindow&) const override {
    return true;
  }

  void on_pop(const InputElement& a, const StackEntry& popped, Context& ctx,
              const TopWindow& after, Sink& sink) override {
    ctx.set_app(0, ctx.app(0) + 1.0);
    const InputElement* nt = after.top(1);
    EmitRecord r;
    r.tag = kTagPop;
    r.idx = {a.index, popped.elem.index};
    r.val = {popped.elem.value.x, nt ? nt->value.x : -1.0};
    sink.emit(r);
  }

  void after_element(const InputElement& a, bool, Context& ctx, const TopWindow&,
                     Sink& sink) override {
    EmitRecord r;
    r.tag = kTagPop + 1;
    r.idx = {a.index, static_cast<Index>(ctx.app(0))};
    sink.emit(r);
  }

  void report(const StackEntry& top, Sink& sink) override {
    EmitRecord r;
    r.tag = kTagPop + 2;
    r.idx = {top.elem.index, 0};
    r.val = {top.elem.value.x, 0.0};
    sink.emit(r);
  }
};

// NSV with per-pop output: same conditions, but every pop emits a record, so
// green engines must enumerate the spans they would otherwise jump over.
class NsvEnumContract final : public StackAlgorithmContract {
 public:
  static constexpr std::int32_t kTagPop = 3;

  int top_visibility() const override { return 1; }
  bool needs_pop_enumeration() const override { return true; }

  int init(const InputAccessor&, Context& ctx) override {
    ctx.app_resize(0);
    return 0;
  }
  bool pop_condition(const InputElement& a, const Context&, const TopWindow& t) const override {
    const InputElement* top = t.top(1);
    return top && top->value.x >= a.value.x;
  }
  bool push_condition(const InputElement&, const Context&, const TopWindow&) const override {
    return true;
  }
  void on_pop(const InputElement& a, const StackEntry& popped, Context&, const TopWindow& after,
              Sink& sink) override {
    const InputElement* nt = after.top(1);
    EmitRecord r;
    r.tag = kTagPop;
    r.idx = {a.index, popped.elem.index};
    r.val = {popped.elem.value.x, nt ? nt->value.x : -1.0};
    sink.emit(r);
  }
  void after_element(const InputElement&, bool, Context&, const TopWindow&, Sink&) override {}
  void report(const StackEntry& top, Sink& sink) override {
    EmitRecord r;
    r.tag = kTagPop + 1;
    r.idx = {top.elem.index, 0};
    r.val = {top.elem.value.x, 0.0};
    sink.emit(r);
  }
};

// Wraps a neighbor oracle and checks every answer against a shadow plain
// stack kept in lockstep by the test loop (index and context equality).
class LockstepOracle final : public NeighborOracle {
 public:
  LockstepOracle(NeighborOracle& inner, StackAlgorithmContract& alg, const InputAccessor& in)
      : inner_(inner), alg_(alg), in_(in) {}

  std::vector<StackEntry> shadow;   // plain stack content before the current element
  const Context* live = nullptr;    // plain live context before the current element
  bool checking = true;
  long long checks = 0;
  long long mismatches = 0;

  NeighborResult lp(const InputElement& a_c, const Context* live_ctx, const StackEntry& t,
                    const StackEntry& b, Index q, const InputAccessor& in) override {
    NeighborResult r = inner_.lp(a_c, live_ctx, t, b, q, in);
    if (!checking) return r;
    std::vector<StackEntry> sim = shadow;
    if (a_c.index != 0 && a_c.index == t.elem.index) {
      // Treating-element trick: the state right after t was pushed.
      while (!sim.empty() && sim.back().elem.index > t.elem.index) sim.pop_back();
    } else if (a_c.index != 0) {
      while (!sim.empty()) {
        TopWindow w = window_of(sim);
        if (!alg_.pop_condition(a_c, *live, w)) break;
        sim.pop_back();
      }
    }
    const StackEntry* tl = nullptr;
    const StackEntry* tu = nullptr;
    for (const auto& e : sim) {
      if (e.elem.index < b.elem.index || e.elem.index > t.elem.index) continue;
      if (e.elem.index <= q)
        tl = &e;
      else if (!tu)
        tu = &e;
    }
    ++checks;
    bool ok = r.lower.present == (tl != nullptr) && r.upper.present == (tu != nullptr);
    if (ok && tl)
      ok = r.lower.entry.elem.index == tl->elem.index && r.lower.entry.ctx == tl->ctx;
    if (ok && tu)
      ok = r.upper.entry.elem.index == tu->elem.index && r.upper.entry.ctx == tu->ctx;
    if (!ok) ++mismatches;
    return r;
  }

 private:
  TopWindow window_of(const std::vector<StackEntry>& sim) const {
    TopWindow w;
    int k = alg_.top_visibility();
    int m = static_cast<int>(sim.size());
    w.count = k < m ? k : m;
    for (int i = 0; i < w.count; ++i) w.elems[i] = sim[static_cast<size_t>(m - 1 - i)].elem;
    if (m > 0) w.top_ctx = &sim.back().ctx;
    return w;
  }

  NeighborOracle& inner_;
  StackAlgorithmContract& alg_;
  const InputAccessor& in_;
};

}  // namespace cstack::test
