#pragma once

#include "cstack/core.hpp"
#include "cstack/metrics.hpp"
#include "cstack/partition.hpp"

namespace cstack {

struct NeighborSide {
  bool present = false;
  StackEntry entry;
};

struct NeighborResult {
  NeighborSide lower;
  NeighborSide upper;
};

// The \lp operation a green algorithm provides: nearest surviving stack
// neighbors of a query index, searched within one block window.
class NeighborOracle {
 public:
  virtual ~NeighborOracle() = default;

  // Neighbors of q among the stack elements in [b.index, t.index] that remain
  // after a_c's pops complete. a_c.index == 0 asks about the current stack
  // with no pops at all (the drain walk uses this); `live` is the treating
  // element's auxiliary state when the engine has it mid-treatment. Neighbors
  // falling outside [b, t] come back absent. Returned entries carry full
  // push contexts.
  virtual NeighborResult lp(const InputElement& a_c, const Context* live, const StackEntry& t,
                            const StackEntry& b, Index q, const InputAccessor& in) = 0;

  // Declared read budget for one call over a window of m input values.
  // Enforced, not trusted; oracles must also stay within O(1) cells.
  virtual long long read_budget(Index m) const {
    return 64 * (m + 4) * (ceil_log2(m + 4) + 1);
  }
};

inline NeighborResult call_lp(NeighborOracle& o, const InputElement& a_c, const Context* live,
                              const StackEntry& t, const StackEntry& b, Index q,
                              const InputAccessor& in, Metrics& metrics) {
  if (q < b.elem.index || q > t.elem.index)
    throw OracleInconsistency("lp: query outside [b, t]");
  long long before = metrics.element_reads;
  ++metrics.lp_calls;
  NeighborResult r = o.lp(a_c, live, t, b, q, in);
  long long used = metrics.element_reads - before;
  if (used > o.read_budget(t.elem.index - b.elem.index))
    throw OracleBudgetExceeded("lp: oracle exceeded its declared read budget");
  if (r.lower.present &&
      (r.lower.entry.elem.index < b.elem.index || r.lower.entry.elem.index > q))
    throw OracleInconsistency("lp: lower neighbor outside [b, q]");
  if (r.upper.present &&
      (r.upper.entry.elem.index <= q || r.upper.entry.elem.index > t.elem.index))
    throw OracleInconsistency("lp: upper neighbor outside (q, t]");
  return r;
}

}  // namespace cstack
