#pragma once

#include "cstack/contract.hpp"
#include "cstack/core.hpp"
#include "cstack/metrics.hpp"
#include "cstack/provider.hpp"

namespace cstack {

// The stack slice below a popped entry, read off its mini region. Green
// engines serve on_pop's after-window this way; the structure itself may be
// mid-repair at that moment. Carries elements only (no top context).
inline TopWindow window_below(const StackEntry& popped, const InputAccessor& in, int k) {
  TopWindow w;
  int m = popped.ctx.mini_count();
  for (int j = 1; j < m && w.count < k; ++j) w.elems[w.count++] = in.element(popped.ctx.mini(j));
  return w;
}

// Assembles the push-time snapshot: live auxiliary state plus the mini region
// (self index first, then the pre-push window).
inline Context make_push_snapshot(const Context& live, const InputElement& a,
                                  const TopWindow& pre_push, int k) {
  Context snap = live;
  Index ids[kMaxK + 1];
  ids[0] = a.index;
  int count = 1;
  // One deeper than the visibility window: pops expose the k elements below.
  for (int j = 0; j < pre_push.count && count < k + 1; ++j) ids[count++] = pre_push.elems[j].index;
  snap.set_mini(ids, count);
  return snap;
}

// One run of Algorithm 1 over an arbitrary provider. Also usable in stepping
// form, which block reconstruction and the pyramid module rely on.
class Driver {
 public:
  Driver(StackAlgorithmContract& alg, const InputAccessor& in, StackProvider& stack, Sink& sink,
         Trace* trace = nullptr)
      : alg_(alg), in_(in), stack_(stack), sink_(sink), trace_(trace), k_(alg.top_visibility()) {
    if (k_ < 1 || k_ > kMaxK) throw ContractViolation("contract: k out of range");
  }

  // Line 1 of the scheme: init the auxiliary state, push the declared prefix.
  void start() {
    ctx_ = Context();
    int prefix = alg_.init(in_, ctx_);
    if (prefix < 0 || prefix > in_.size()) throw ContractViolation("contract: bad init prefix");
    for (Index j = 1; j <= prefix; ++j) {
      TopWindow w = stack_.window(in_, k_);
      push_now(in_.element(j), w);
    }
    next_ = prefix + 1;
  }

  // Replay bootstrap: resume as if `bottom` had just been treated.
  void seed(const StackEntry& bottom) {
    ctx_ = bottom.ctx;
    next_ = bottom.elem.index + 1;
  }

  bool done() const { return next_ > in_.size(); }
  Index position() const { return next_; }
  Context& live_ctx() { return ctx_; }

  // Lines 2..8 for one input element.
  void step() {
    InputElement a = in_.element(next_);
    ++next_;
    if (stack_.mass_pop_mode()) {
      treat_mass(a);
    } else {
      while (true) {
        TopWindow w = stack_.window(in_, k_);
        if (!alg_.pop_condition(a, ctx_, w)) break;
        StackEntry popped = stack_.pop();
        if (trace_) trace_->pop(popped.elem.index);
        TopWindow after = stack_.window(in_, k_);
        alg_.on_pop(a, popped, ctx_, after, sink_);
      }
      finish_element(a);
    }
  }

  // Virtual end-of-input drain: report each element top-down.
  void drain() {
    stack_.drain([&](const StackEntry& e) { alg_.report(e, sink_); });
  }

  void run() {
    start();
    while (!done()) step();
    drain();
  }

 private:
  void treat_mass(const InputElement& a) {
    TopWindow w = stack_.window(in_, k_);
    if (alg_.pop_condition(a, ctx_, w)) stack_.mass_pop(a, ctx_, alg_, in_, sink_, trace_);
    finish_element(a);
  }

  void finish_element(const InputElement& a) {
    TopWindow w = stack_.window(in_, k_);
    bool will_push = alg_.push_condition(a, ctx_, w);
    alg_.after_element(a, will_push, ctx_, w, sink_);
    if (will_push) push_now(a, w);
  }

  void push_now(const InputElement& a, const TopWindow& pre_push) {
    if (a.index <= last_pushed_) throw ContractViolation("driver: element pushed twice");
    last_pushed_ = a.index;
    stack_.push({a, make_push_snapshot(ctx_, a, pre_push, k_)});
    if (trace_) trace_->push(a.index);
  }

  StackAlgorithmContract& alg_;
  const InputAccessor& in_;
  StackProvider& stack_;
  Sink& sink_;
  Trace* trace_;
  int k_;
  Context ctx_;
  Index next_ = 1;
  Index last_pushed_ = 0;
};

// Convenience entry point matching the scheme: returns the full event trace.
inline Trace run(StackAlgorithmContract& alg, const InputAccessor& in, StackProvider& stack,
                 Sink& sink) {
  Trace t;
  Driver d(alg, in, stack, sink, &t);
  d.run();
  return t;
}

}  // namespace cstack
