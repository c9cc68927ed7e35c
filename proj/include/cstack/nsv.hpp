#pragma once

#include <limits>

#include "cstack/contract.hpp"
#include "cstack/oracle.hpp"

namespace cstack {

// Nearest-smaller-value fixture: pop while the top value is >= the current
// one, always push, and report each element's surviving top as its nearest
// smaller value. Exercises every engine with k = 1, no geometry involved.
class NsvContract final : public StackAlgorithmContract {
 public:
  static constexpr std::int32_t kTagNsv = 1;

  int top_visibility() const override { return 1; }

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

  void on_pop(const InputElement&, const StackEntry&, Context&, const TopWindow&,
              Sink&) override {}

  void after_element(const InputElement& a, bool, Context&, const TopWindow& t,
                     Sink& sink) override {
    const InputElement* top = t.top(1);
    EmitRecord r;
    r.tag = kTagNsv;
    r.idx = {a.index, top ? top->index : 0};
    r.val = {a.value.x, top ? top->value.x : 0.0};
    sink.emit(r);
  }

  void report(const StackEntry&, Sink&) override {}
};

// The NSV stack holds a strictly increasing value chain, so membership and
// survival are decidable by one backward scan with a running minimum. The
// returned contexts carry the visibility chain below each neighbor; where it
// crosses the window floor it continues through the floor entry's own chain.
class NsvOracle final : public NeighborOracle {
 public:
  explicit NsvOracle(int k = 1) : k_(k) {}

  NeighborResult lp(const InputElement& a_c, const Context*, const StackEntry& t,
                    const StackEntry& b, Index q, const InputAccessor& in) override {
    NeighborResult res;
    double min_after = std::numeric_limits<double>::infinity();
    Index upper_idx = 0;
    double upper_val = 0;
    Index lower_idx = 0;
    double lower_val = 0;
    Index chain[kMaxK + 1];  // lower and the in-stack elements below it
    int chain_n = 0;
    for (Index x = t.elem.index; x >= b.elem.index; --x) {
      double vx = in.at(x).x;
      bool in_stack = vx < min_after;
      if (vx < min_after) min_after = vx;
      if (!in_stack) continue;
      if (lower_idx == 0) {
        // The treating element itself survives its own pops.
        bool survives = a_c.index == 0 || x == a_c.index || vx < a_c.value.x;
        if (!survives) continue;
        if (x > q) {
          upper_idx = x;
          upper_val = vx;
        } else {
          lower_idx = x;
          lower_val = vx;
          chain[chain_n++] = x;
        }
      } else {
        chain[chain_n++] = x;
        if (chain_n >= kMaxK + 1) break;
      }
    }
    if (lower_idx)
      res.lower = {true, make_entry(lower_idx, lower_val, chain + 1, chain_n - 1, b)};
    if (upper_idx) res.upper = {true, make_entry(upper_idx, upper_val, chain, chain_n, b)};
    return res;
  }

  long long read_budget(Index m) const override { return 4 * (m + 4) + 2 * kMaxK; }

 private:
  StackEntry make_entry(Index x, double vx, const Index* below, int nbelow,
                        const StackEntry& floor) const {
    StackEntry e;
    e.elem = {x, {vx, 0.0}};
    e.ctx.app_resize(0);
    Index ids[kMaxK + 1];
    int cnt = 0;
    ids[cnt++] = x;
    for (int j = 0; j < nbelow && cnt < k_ + 1; ++j) ids[cnt++] = below[j];
    if (cnt < k_ + 1 && ids[cnt - 1] == floor.elem.index)
      for (int j = 1; j < floor.ctx.mini_count() && cnt < k_ + 1; ++j)
        ids[cnt++] = floor.ctx.mini(j);
    e.ctx.set_mini(ids, cnt);
    return e;
  }

  int k_;
};

}  // namespace cstack
