#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cstack/core.hpp"

namespace cstack {

// Workspace is measured in abstract cells: one scalar slot or one element
// reference costs 1. Engines post deltas as their structures grow and shrink;
// auxiliary replay stacks post into the same ledger so the peak reflects the
// whole run.
struct CellLedger {
  long long current = 0;
  long long peak = 0;

  void post(long long delta) {
    current += delta;
    if (current > peak) peak = current;
  }
};

inline long long entry_cells(const StackEntry& e) { return 1 + e.ctx.cells_used(); }

struct Metrics {
  CellLedger cells;
  long long element_reads = 0;
  long long replayed_elements = 0;  // elements re-treated inside reconstructions
  long long sum_m_a = 0;            // green mass-pop accounting (sum of destroyed block sizes)
  long long lp_calls = 0;
  long long wall_time_ns = 0;
  std::uint64_t output_hash = kFnvOffset;

  std::vector<long long> charges_per_level;  // blocks materialized, indexed by level
  // Charge ledger per block incarnation: the first reconstruction of a block
  // charges the block itself, every later one charges the drained block that
  // triggered it. No incarnation may accumulate more than two charges.
  std::unordered_map<std::uint64_t, int> charges_per_block;
  std::unordered_set<std::uint64_t> materialized_blocks;
  int max_block_charge = 0;

  long long total_charges() const {
    long long t = 0;
    for (const auto& [k, c] : charges_per_block) {
      (void)k;
      t += c;
    }
    return t;
  }

  void note_materialization(int level) {
    if (static_cast<int>(charges_per_level.size()) <= level) charges_per_level.resize(level + 1, 0);
    ++charges_per_level[level];
  }

  void charge_block(std::uint64_t target_gen, std::uint64_t trigger_gen) {
    std::uint64_t key = materialized_blocks.insert(target_gen).second ? target_gen : trigger_gen;
    int c = ++charges_per_block[key];
    if (c > max_block_charge) max_block_charge = c;
  }
};

// Read-only input view. `at` is 1-based; every call counts as one element read.
class InputAccessor {
 public:
  explicit InputAccessor(Metrics* m = nullptr) : metrics_(m) {}
  virtual ~InputAccessor() = default;

  virtual Index size() const = 0;

  Payload at(Index i) const {
    if (metrics_) ++metrics_->element_reads;
    return fetch(i);
  }
  InputElement element(Index i) const { return {i, at(i)}; }

  virtual Metrics* metrics() const { return metrics_; }
  void set_metrics(Metrics* m) { metrics_ = m; }

 protected:
  virtual Payload fetch(Index i) const = 0;

 private:
  Metrics* metrics_;
};

class VectorAccessor final : public InputAccessor {
 public:
  VectorAccessor(std::vector<Payload> data, Metrics* m = nullptr)
      : InputAccessor(m), data_(std::move(data)) {}
  Index size() const override { return static_cast<Index>(data_.size()); }

 protected:
  Payload fetch(Index i) const override { return data_[static_cast<size_t>(i - 1)]; }

 private:
  std::vector<Payload> data_;
};

// Presents base indices remap(1..n) in a new scan order. Used by applications
// that walk the input from a rotated start, in reverse, or merged by key.
class RemapAccessor final : public InputAccessor {
 public:
  // The base accessor does the read counting; this view stays transparent.
  RemapAccessor(const InputAccessor& base, std::vector<Index> remap)
      : InputAccessor(nullptr), base_(base), remap_(std::move(remap)) {}
  Index size() const override { return static_cast<Index>(remap_.size()); }
  Index source_index(Index i) const { return remap_[static_cast<size_t>(i - 1)]; }
  Metrics* metrics() const override { return base_.metrics(); }

 protected:
  Payload fetch(Index i) const override {
    return base_.at(remap_[static_cast<size_t>(i - 1)]);
  }

 private:
  const InputAccessor& base_;
  std::vector<Index> remap_;
};

}  // namespace cstack
