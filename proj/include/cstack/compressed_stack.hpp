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

// How a compressed block gets rematerialized when it becomes the next Nex:
// Replay re-runs the algorithm from the stored context; Lp asks the green
// neighbor oracle for the missing sub-block boundaries (hybrid top levels).
enum class Strategy : std::uint8_t { Replay, Lp };

// Boundary record of one block: first/last pushed elements currently in the
// stack, the first element's context (the replay seed), and the last
// element's context where an Lp materialization will need it.
struct SubRecord {
  Index span_lo = 0;
  Index first = 0;
  Index last = 0;
  Context first_ctx;
  Context last_ctx;
  bool has_last_ctx = false;
  std::uint64_t gen = 0;  // incarnation of the described block

  long long cells() const {
    return 2 + first_ctx.cells_used() + (has_last_ctx ? last_ctx.cells_used() : 0);
  }
};

struct BlockDesc {
  int level = 0;  // global level
  Span span;
  Index top = 0;  // 0 = no elements of this block in the stack
  std::uint64_t gen = 0;
  std::vector<SubRecord> subs;    // non-bottom levels, bottom to top
  std::vector<StackEntry> items;  // bottom level only, bottom to top

  bool has_elements() const { return top != 0; }
  Index first_in_stack() const {
    return items.empty() ? (subs.empty() ? 0 : subs.front().first) : items.front().elem.index;
  }
  long long cells() const {
    long long c = 4;
    for (const SubRecord& s : subs) c += s.cells();
    for (const StackEntry& e : items) c += entry_cells(e);
    return c;
  }
};

// The hierarchical compressed stack: p-way block partition, partially
// compressed Fir/Nex per level, explicit bottom level, push/pop cascades and
// recursive reconstruction. Also hosts the hybrid variant, which swaps the
// reconstruction strategy of the top levels to the neighbor oracle.
class CompressedStack final : public StackProvider {
 public:
  // Covers global levels from_level..part.levels(); from_level > 1 only for
  // the auxiliary stacks spawned by reconstruction.
  CompressedStack(const Partition& part, StackAlgorithmContract& alg, const InputAccessor& in,
                  Metrics& metrics, std::vector<Strategy> strategies,
                  NeighborOracle* oracle = nullptr, int from_level = 1, int depth = 0);
  ~CompressedStack() override;

  CompressedStack(const CompressedStack&) = delete;
  CompressedStack& operator=(const CompressedStack&) = delete;

  void push(const StackEntry& e) override;
  StackEntry pop() override;
  const StackEntry* top_entry() const override;
  bool empty() const override { return size_ == 0; }
  Index size() const override { return size_; }
  Index top_index() const override { return top_index_; }

  // Introspection (tests, lockstep validation).
  struct LevelView {
    const BlockDesc* fir = nullptr;
    const BlockDesc* nex = nullptr;
  };
  LevelView level_view(int gl) const;
  const std::vector<SubRecord>& tail() const { return tail_; }
  int from_level() const { return from_; }
  int bottom_level() const { return part_.levels(); }
  const Partition& partition() const { return part_; }

 private:
  struct Level {
    std::optional<BlockDesc> fir;
    std::optional<BlockDesc> nex;
  };

  Level& level(int gl) { return levels_[static_cast<size_t>(gl - from_)]; }
  const Level& level(int gl) const { return levels_[static_cast<size_t>(gl - from_)]; }
  bool is_bottom(int gl) const { return gl == part_.levels(); }
  bool store_last_ctx(int described_level) const {
    return strategies_[static_cast<size_t>(described_level)] == Strategy::Lp;
  }

  void post(long long d) {
    cells_ += d;
    metrics_.cells.post(d);
  }

  BlockDesc make_block(int gl, Span s, const StackEntry& e, std::uint64_t child_gen);
  SubRecord make_record(int child_level, Span child_span, const StackEntry& e,
                        std::uint64_t child_gen);
  void extend_block(BlockDesc& b, int gl, Span s, const StackEntry& e, std::uint64_t child_gen);
  SubRecord compress_block(const BlockDesc& b);
  BlockDesc* block_of_top(int gl, Index t);

  // Pop internals.
  void propagate_top(const StackEntry& top_pair);
  void repair(int src_level, BlockDesc* src_block, std::uint64_t trigger_gen);
  void materialize_chain(SubRecord rec, int target_level);
  void replay_materialize(const SubRecord& rec, int target_level);
  void materialize_single(const StackEntry& e, int target_level, std::uint64_t gen);
  BlockDesc green_build(const SubRecord& rec, int gl);
  void harvest(CompressedStack& aux, int target_level);

  Partition part_;
  StackAlgorithmContract& alg_;
  const InputAccessor& in_;
  Metrics& metrics_;
  std::vector<Strategy> strategies_;  // 1-based by level
  NeighborOracle* oracle_;
  int from_;
  int depth_;
  std::uint64_t uid_;

  std::vector<Level> levels_;
  std::vector<SubRecord> tail_;  // top-level compressed blocks below Nex, bottom to top
  Index size_ = 0;
  Index top_index_ = 0;
  long long cells_ = 0;
};

}  // namespace cstack
