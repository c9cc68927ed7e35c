#pragma once

#include <functional>
#include <vector>

#include "cstack/contract.hpp"
#include "cstack/core.hpp"
#include "cstack/metrics.hpp"

namespace cstack {

// Storage behind the driver. Pushes must be strictly above the current top in
// scan order (the same input index may re-enter after a pop, e.g. through the
// mini-stack, but never below or at the current top).
class StackProvider {
 public:
  virtual ~StackProvider() = default;

  virtual void push(const StackEntry& e) = 0;
  virtual StackEntry pop() = 0;
  // Pointer valid until the next mutation; nullptr when empty.
  virtual const StackEntry* top_entry() const = 0;
  virtual bool empty() const = 0;
  virtual Index size() const = 0;
  virtual Index top_index() const = 0;  // 0 when empty

  // Up-to-k window, top first. Default derives depths >= 2 from the top
  // entry's mini region, refetching payloads through the accessor.
  virtual TopWindow window(const InputAccessor& in, int k) const;

  // Visit all entries top-down, consuming the stack (final report).
  virtual void drain(const std::function<void(const StackEntry&)>& fn);

  // Engines that take over the whole pop phase of one element (green mode).
  // Only consulted when mass_pop_mode() is true; the driver then calls
  // mass_pop once instead of running the condition-driven pop loop.
  virtual bool mass_pop_mode() const { return false; }
  virtual void mass_pop(const InputElement&, Context&, StackAlgorithmContract&,
                        const InputAccessor&, Sink&, Trace*) {
    throw Error("mass_pop: unsupported by this provider");
  }
};

inline TopWindow StackProvider::window(const InputAccessor& in, int k) const {
  TopWindow w;
  const StackEntry* t = top_entry();
  if (!t) return w;
  w.top_ctx = &t->ctx;
  w.elems[0] = t->elem;
  w.count = 1;
  int m = t->ctx.mini_count();
  int c = k < m ? k : m;
  for (int j = 1; j < c; ++j) w.elems[w.count++] = in.element(t->ctx.mini(j));
  return w;
}

inline void StackProvider::drain(const std::function<void(const StackEntry&)>& fn) {
  while (!empty()) fn(pop());
}

class PlainStack final : public StackProvider {
 public:
  explicit PlainStack(Metrics* m = nullptr) : metrics_(m) {}
  ~PlainStack() override { post(-cells_); }

  void push(const StackEntry& e) override {
    if (!items_.empty() && e.elem.index <= items_.back().elem.index)
      throw OrderViolation("PlainStack: push index not above current top");
    items_.push_back(e);
    post(entry_cells(e));
  }

  StackEntry pop() override {
    if (items_.empty()) throw EmptyStack("PlainStack: pop on empty stack");
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

  // Direct window; avoids payload refetches and serves any i <= size.
  TopWindow window(const InputAccessor&, int k) const override {
    TopWindow w;
    int m = static_cast<int>(items_.size());
    w.count = k < m ? k : m;
    for (int i = 0; i < w.count; ++i) w.elems[i] = items_[m - 1 - i].elem;
    if (m > 0) w.top_ctx = &items_.back().ctx;
    return w;
  }

  const StackEntry& at_depth(int i) const { return items_[items_.size() - i]; }  // i=1 is top
  const std::vector<StackEntry>& items() const { return items_; }

 private:
  void post(long long d) {
    cells_ += d;
    if (metrics_) metrics_->cells.post(d);
  }

  std::vector<StackEntry> items_;
  Metrics* metrics_;
  long long cells_ = 0;
};

// Top-(k-1) buffer layered over any provider; gives top-k visibility while the
// provider itself only ever answers top(1). k = 1 is a transparent pass-through.
class MiniStack final : public StackProvider {
 public:
  MiniStack(StackProvider& inner, int k, Metrics* m = nullptr)
      : inner_(inner), k_(k), metrics_(m) {
    if (k < 1 || k > kMaxK) throw BadParameter("MiniStack: k out of range");
  }
  ~MiniStack() override { post(-cells_); }

  // Replay bootstrap: the buffer starts holding the block's bottom element.
  void seed(const StackEntry& e) {
    buf_.push_back(e);
    post(entry_cells(e));
  }

  void push(const StackEntry& e) override {
    if (k_ == 1) {
      inner_.push(e);
      return;
    }
    if (!buf_.empty() && e.elem.index <= buf_.back().elem.index)
      throw OrderViolation("MiniStack: push index not above current top");
    buf_.push_back(e);
    post(entry_cells(e));
    if (static_cast<int>(buf_.size()) > k_ - 1) {
      StackEntry out = buf_.front();
      buf_.erase(buf_.begin());
      post(-entry_cells(out));
      inner_.push(out);
    }
  }

  StackEntry pop() override {
    if (k_ == 1) return inner_.pop();
    if (buf_.empty()) throw EmptyStack("MiniStack: pop on empty stack");
    StackEntry e = buf_.back();
    buf_.pop_back();
    post(-entry_cells(e));
    if (!inner_.empty()) {
      StackEntry refill = inner_.pop();
      buf_.insert(buf_.begin(), refill);
      post(entry_cells(refill));
    }
    return e;
  }

  const StackEntry* top_entry() const override {
    if (k_ == 1) return inner_.top_entry();
    return buf_.empty() ? nullptr : &buf_.back();
  }
  bool empty() const override { return k_ == 1 ? inner_.empty() : buf_.empty(); }
  Index size() const override { return static_cast<Index>(buf_.size()) + inner_.size(); }
  Index top_index() const override {
    const StackEntry* t = top_entry();
    return t ? t->elem.index : 0;
  }

  // The window view runs through the top context's mini region (the base
  // class default). During a replayed reconstruction that chain reaches
  // through the replay floor, which the buffered entries alone cannot.

  void drain(const std::function<void(const StackEntry&)>& fn) override {
    while (!buf_.empty()) {
      StackEntry e = buf_.back();
      buf_.pop_back();
      post(-entry_cells(e));
      fn(e);
    }
    inner_.drain(fn);
  }

  int buffered() const { return static_cast<int>(buf_.size()); }
  const StackEntry& buf_at(int i) const { return buf_[i]; }  // bottom first

 private:
  void post(long long d) {
    cells_ += d;
    if (metrics_) metrics_->cells.post(d);
  }

  StackProvider& inner_;
  int k_;
  Metrics* metrics_;
  std::vector<StackEntry> buf_;
  long long cells_ = 0;
};

}  // namespace cstack
