#pragma once

#include <array>

#include "cstack/core.hpp"
#include "cstack/metrics.hpp"

namespace cstack {

// The up-to-k topmost stack elements, top first, plus the push-time context
// of the top element (applications keep per-entry data such as carried
// vertices or shadow points in there).
struct TopWindow {
  std::array<InputElement, kMaxK> elems;
  int count = 0;
  const Context* top_ctx = nullptr;

  // 1-based: top(1) is the topmost element; nullptr when i exceeds the
  // current size or the contract's k.
  const InputElement* top(int i) const {
    if (i < 1 || i > count) return nullptr;
    return &elems[i - 1];
  }
};

// Behavioral interface of a stack algorithm: one input scan, condition-driven
// pops, at most one push per element, O(1) auxiliary state. All member
// functions must be deterministic in their arguments; engines replay them.
class StackAlgorithmContract {
 public:
  virtual ~StackAlgorithmContract() = default;

  // Stack-depth visibility k (1..kMaxK).
  virtual int top_visibility() const = 0;

  // True if on_pop must run for every popped element even under mass pops
  // (green engines then enumerate the destroyed span by local replay).
  virtual bool needs_pop_enumeration() const { return false; }

  // Initialize the auxiliary state. Returns the number of leading input
  // elements pushed as-is before the scan loop starts (their push context is
  // the returned one); the scan then begins at prefix_pushes + 1.
  virtual int init(const InputAccessor& in, Context& ctx) = 0;

  virtual bool pop_condition(const InputElement& a, const Context& ctx,
                             const TopWindow& tops) const = 0;
  virtual bool push_condition(const InputElement& a, const Context& ctx,
                              const TopWindow& tops) const = 0;

  // `tops_after` is the window after `popped` was removed.
  virtual void on_pop(const InputElement& a, const StackEntry& popped, Context& ctx,
                      const TopWindow& tops_after, Sink& sink) = 0;

  // Runs once per scanned element, after pops and the push decision but
  // before the push itself becomes visible.
  virtual void after_element(const InputElement& a, bool will_push, Context& ctx,
                             const TopWindow& tops, Sink& sink) = 0;

  // Final report, invoked per element while draining the stack top-down.
  virtual void report(const StackEntry& top, Sink& sink) = 0;
};

}  // namespace cstack
