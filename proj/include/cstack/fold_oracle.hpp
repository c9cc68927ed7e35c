#pragma once

#include <vector>

#include "cstack/driver.hpp"
#include "cstack/oracle.hpp"

namespace cstack {

// Exact neighbor oracle for any contract: folds the window forward from the
// stored floor context, mirroring the driver's own condition evaluation, then
// applies the treating element's pops. One forward pass of reads; the fold's
// stack is transient workspace proportional to the slice depth.
class FoldOracle final : public NeighborOracle {
 public:
  explicit FoldOracle(StackAlgorithmContract& alg) : alg_(alg) {}

  NeighborResult lp(const InputElement& a_c, const Context* live, const StackEntry& t,
                    const StackEntry& b, Index q, const InputAccessor& in) override {
    // Windows are served through the context chains so visibility reaches
    // below the fold floor, exactly as in a block replay.
    SimStack sim(in.metrics());
    sim.push(b);
    NullSink sink;
    Driver d(alg_, in, sim, sink, nullptr);
    d.seed(b);
    while (!d.done() && d.position() <= t.elem.index) d.step();
    if (sim.top_index() != t.elem.index)
      throw OracleInconsistency("fold lp: window top did not reappear");

    int k = alg_.top_visibility();
    bool active = a_c.index != 0 && a_c.index != t.elem.index;
    if (active) {
      Context ctx = live ? *live : d.live_ctx();
      while (!sim.empty()) {
        TopWindow w = sim.window(in, k);
        if (!alg_.pop_condition(a_c, ctx, w)) break;
        sim.pop();
      }
    }

    NeighborResult res;
    for (Index i = 1; i <= sim.size(); ++i) {
      const StackEntry& e = sim.at(sim.size() - i);  // top down
      if (e.elem.index > t.elem.index) continue;
      if (e.elem.index > q) {
        res.upper = {true, e};
      } else {
        if (e.elem.index >= b.elem.index) res.lower = {true, e};
        break;
      }
    }
    return res;
  }

  long long read_budget(Index m) const override { return 16 * (m + 8); }

 private:
  // Plain storage without the direct-window shortcut: the base class window
  // walks the top context's mini region.
  class SimStack final : public StackProvider {
   public:
    explicit SimStack(Metrics* m) : metrics_(m) {}
    ~SimStack() override { post(-cells_); }

    void push(const StackEntry& e) override {
      items_.push_back(e);
      post(entry_cells(e));
    }
    StackEntry pop() override {
      if (items_.empty()) throw EmptyStack("fold lp: auxiliary underflow");
      StackEntry e = items_.back();
      items_.pop_back();
      post(-entry_cells(e));
      return e;
    }
    const StackEntry* top_entry() const override {
      return items_.empty() ? nullptr : &items_.back();
    }
    bool empty() const override { return items_.empty(); }
    Index size() const override { return static_cast<Index>(items_.size()); }
    Index top_index() const override { return items_.empty() ? 0 : items_.back().elem.index; }
    const StackEntry& at(Index i) const { return items_[static_cast<size_t>(i)]; }

   private:
    void post(long long d) {
      cells_ += d;
      if (metrics_) metrics_->cells.post(d);
    }
    std::vector<StackEntry> items_;
    Metrics* metrics_;
    long long cells_ = 0;
  };

  StackAlgorithmContract& alg_;
};

}  // namespace cstack
