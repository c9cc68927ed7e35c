#pragma once

#include <vector>

#include "cstack/contract.hpp"
#include "cstack/engine.hpp"
#include "cstack/geometry.hpp"
#include "cstack/fold_oracle.hpp"
#include "cstack/oracle.hpp"
#include "cstack/rng.hpp"

namespace cstack {

// Convex hull of a simple polygon, boundary scan with k = 2 visibility.
// The scan starts at the lowest vertex (a hull vertex), pops while the top
// stops being a left turn, and skips runs of vertices that dive back inside
// the current hull (pockets) until the boundary re-crosses the closing lid.
//
// Auxiliary state layout:
//   [0] mode (0 open, 1 pocket)   [1,2] previous vertex
//   [3] lid vertex index          [4,5] lid vertex
//   [6,7] start vertex (stack bottom, constant over the run)
class HullContract final : public StackAlgorithmContract {
 public:
  static constexpr std::int32_t kTagHullVertex = 10;
  static constexpr int kMode = 0;
  static constexpr int kPrevX = 1;
  static constexpr int kPrevY = 2;
  static constexpr int kLidIdx = 3;
  static constexpr int kLidX = 4;
  static constexpr int kLidY = 5;
  static constexpr int kStartX = 6;
  static constexpr int kStartY = 7;

  int top_visibility() const override { return 2; }
  int init(const InputAccessor& in, Context& ctx) override;
  bool pop_condition(const InputElement& a, const Context& ctx,
                     const TopWindow& tops) const override;
  bool push_condition(const InputElement& a, const Context& ctx,
                      const TopWindow& tops) const override;
  void on_pop(const InputElement&, const StackEntry&, Context&, const TopWindow&, Sink&) override {}
  void after_element(const InputElement& a, bool will_push, Context& ctx, const TopWindow& tops,
                     Sink&) override;
  void report(const StackEntry& top, Sink& sink) override;

  // The context an element carries right after being pushed; the oracle must
  // reproduce it exactly.
  static Context push_time_app_ctx(Point self, Point start);

 private:
  bool effectively_open(const InputElement& a, const Context& ctx) const;
  bool enters_pocket(const InputElement& a, const Context& ctx, const TopWindow& tops) const;
};

// A polygonal chain of consecutive input positions, optionally extended by
// one synthetic vertex (the treating element during oracle queries).
struct ChainView {
  const InputAccessor* in = nullptr;
  Index lo = 0;
  Index hi = 0;
  bool has_extra = false;
  Point extra;

  Index size() const { return hi - lo + 1 + (has_extra ? 1 : 0); }
  bool is_extra(Index j) const { return has_extra && j == hi - lo + 1; }
  Point at(Index j) const { return is_extra(j) ? extra : in->at(lo + j); }
  Index input_index(Index j) const { return is_extra(j) ? 0 : lo + j; }
};

struct BridgeResult {
  Index u = 0;  // view positions, u < v
  Index v = 0;
};

// Hull edge of the view chain crossed by the ray, found by a tandem walk
// over dominating vertices. O(1) cells, reads linear in the view size.
BridgeResult find_bridge(const ChainView& chain, Point origin, Point dir);

struct HullRun {
  std::vector<Index> hull_indices;  // original 1-based polygon indices, CCW
  std::vector<Point> hull_points;
  Metrics metrics;
};

// Runs the hull contract under the given engine; output is engine-invariant.
HullRun convex_hull(const std::vector<Point>& poly, const EngineConfig& cfg, std::uint64_t seed);

// Scan rotation: 1-based remap starting at the lowest (y, then x) vertex.
std::vector<Index> hull_scan_order(const std::vector<Point>& poly);

}  // namespace cstack
