#pragma once

#include <optional>
#include <vector>

#include "cstack/contract.hpp"
#include "cstack/core.hpp"
#include "cstack/metrics.hpp"
#include "cstack/oracle.hpp"
#include "cstack/partition.hpp"
#include "cstack/provider.hpp"

namespace cstack {

// Binary block partition over s levels with a compressed bottom level. Pops
// are handled per treated element as one mass pop: the neighbor oracle jumps
// straight to the surviving top, destroyed blocks are only accounted, never
// enumerated (unless the contract demands pop enumeration, which is served by
// a local replay of the destroyed span).
class GreenStack final : public StackProvider {
 public:
  GreenStack(Index n, int s, StackAlgorithmContract& alg, const InputAccessor& in,
             Metrics& metrics, NeighborOracle& oracle);
  ~GreenStack() override;

  GreenStack(const GreenStack&) = delete;
  GreenStack& operator=(const GreenStack&) = delete;

  void push(const StackEntry& e) override;
  StackEntry pop() override;  // unsupported; pops flow through mass_pop
  const StackEntry* top_entry() const override;
  bool empty() const override;
  // Exact until the first oracle jump; -1 afterwards (a jump never learns how
  // many elements it removed — that is the point of the technique).
  Index size() const override { return size_known_ ? size_ : -1; }
  Index top_index() const override { return top_index_; }

  bool mass_pop_mode() const override { return true; }
  void mass_pop(const InputElement& a_c, Context& live, StackAlgorithmContract& alg,
                const InputAccessor& in, Sink& sink, Trace* trace) override;

  void drain(const std::function<void(const StackEntry&)>& fn) override;

  int levels() const { return part_.levels(); }
  bool explicit_bottom() const { return explicit_bottom_; }

 private:
  struct GBlock {
    Span span;
    StackEntry first;
    StackEntry last;
    std::vector<StackEntry> items;  // explicit bottom blocks only
    bool explicit_items = false;

    bool single() const { return first.elem.index == last.elem.index; }
    long long cells() const {
      long long c = 4;
      if (explicit_items) {
        for (const StackEntry& e : items) c += entry_cells(e);
      } else {
        c += entry_cells(first) + entry_cells(last);
      }
      return c;
    }
  };
  struct GLevel {
    std::optional<GBlock> fir;
    std::optional<GBlock> nex;
  };

  void post(long long d) {
    cells_ += d;
    metrics_.cells.post(d);
  }
  GBlock* slot(int level, bool fir) {
    auto& o = fir ? levels_[level - 1].fir : levels_[level - 1].nex;
    return o ? &*o : nullptr;
  }
  void drop(int level, bool fir);
  GBlock make_gblock(int level, Span s, const StackEntry& e);

  // Deepest block holding the current top (level s downward... fir first).
  GBlock* top_block(int* level_out = nullptr, bool* is_fir_out = nullptr);
  const GBlock* top_block_const() const;

  // After the top moved to `survivor` (in a block at `level`): retarget the
  // ancestor blocks, drop the ones that emptied, and rebuild the descriptor
  // chain below via one boundary query per level.
  void retarget_all(const StackEntry& new_top, bool count_m_a);
  void rebuild_chain(const StackEntry& survivor, int level, const InputAccessor& in);
  void rebuild_explicit_items(GBlock& b, const InputAccessor& in);

  // One report-phase removal (no conditions): pop the top, repair the chain.
  StackEntry remove_top_one(const InputAccessor& in);

  StackEntry bottom_entry() const;
  void enumerate_jumped_pops(const InputElement& a_c, const StackEntry& survivor,
                             const StackEntry& old_top, Index micro_floor, Context& live,
                             StackAlgorithmContract& alg, const InputAccessor& in, Sink& sink,
                             Trace* trace, bool pop_survivor_too = false);

  Partition part_;
  StackAlgorithmContract& alg_;
  const InputAccessor& in_;
  Metrics& metrics_;
  NeighborOracle& oracle_;
  bool explicit_bottom_;
  int k_;

  std::vector<GLevel> levels_;
  Index size_ = 0;
  bool size_known_ = true;
  Index top_index_ = 0;
  long long cells_ = 0;
};

}  // namespace cstack
