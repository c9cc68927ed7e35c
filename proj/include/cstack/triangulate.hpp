#pragma once

#include <vector>

#include "cstack/contract.hpp"
#include "cstack/engine.hpp"
#include "cstack/fold_oracle.hpp"
#include "cstack/geometry.hpp"

namespace cstack {

// Triangulation of an x-monotone polygon: vertices merged by abscissa, the
// stack holds the pending reflex chain, diagonals come out on pops. The
// classic formulation re-pushes the last popped vertex; here popped survivors
// ride in the pushing element's context as carried vertices, so every input
// element is pushed exactly once.
//
// Payload tag encoding: original index plus chain code (0 lower, 1 upper,
// 2 left endpoint, 3 right endpoint).
class TriContract final : public StackAlgorithmContract {
 public:
  static constexpr std::int32_t kTagDiagonal = 20;

  // live context layout
  static constexpr int kStepOwner = 0;   // scan index of the element mid-pop
  static constexpr int kLastIdx = 1;     // last consumed vertex (scan index)
  static constexpr int kLastX = 2;
  static constexpr int kLastY = 3;
  static constexpr int kLastTag = 4;
  static constexpr int kPendOwner = 5;   // pending carried list for the push
  static constexpr int kPendCount = 6;
  static constexpr int kPend0 = 7;       // deepest first: (idx, x, y, tag) x2
  static constexpr int kPend1 = 11;
  static constexpr int kNOrig = 15;
  static constexpr int kAppCells = 16;

  static double pack_tag(Index original, int chain_code) {
    return static_cast<double>(original * 4 + chain_code);
  }
  static Index orig_of(double tag) { return static_cast<Index>(tag) / 4; }
  static int chain_of(double tag) { return static_cast<int>(tag) % 4; }

  int top_visibility() const override { return 2; }
  bool needs_pop_enumeration() const override { return true; }

  int init(const InputAccessor& in, Context& ctx) override;
  bool pop_condition(const InputElement& a, const Context& ctx,
                     const TopWindow& tops) const override;
  bool push_condition(const InputElement& a, const Context& ctx,
                      const TopWindow& tops) const override;
  void on_pop(const InputElement& a, const StackEntry& popped, Context& ctx,
              const TopWindow& tops_after, Sink& sink) override;
  void after_element(const InputElement& a, bool will_push, Context& ctx, const TopWindow& tops,
                     Sink& sink) override;
  void report(const StackEntry&, Sink&) override {}

 private:
  struct Logical {
    Index idx;
    Point pt;
  };
  // The up-to-three logical vertices an entry contributes, top last.
  static int logical_of(const StackEntry& e, Logical out[3]);
  static bool same_chain(const Payload& a, const Payload& b);
  static bool adjacent(const Payload& a, const Payload& b, Index n_orig);
  bool diag_inside(const InputElement& a, Point middle, Point next) const;
};

struct TriRun {
  std::vector<std::pair<Index, Index>> diagonals;  // original 1-based index pairs
  Metrics metrics;
};

// Scan order, chain tags and the run itself; output is engine-invariant.
TriRun triangulate_monotone(const std::vector<Point>& poly, const EngineConfig& cfg,
                            std::uint64_t seed);

// The merged-by-x scan as a payload sequence with tags; exposed for tests.
std::vector<Payload> tri_scan_sequence(const std::vector<Point>& poly);

}  // namespace cstack
