#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace cstack {

using Index = std::int64_t;

// Fixed capacity of a Context in scalar cells. The auxiliary state of a stack
// algorithm must be O(1); anything that does not fit here is a contract bug.
constexpr int kContextCap = 64;

// Largest supported stack-depth visibility k.
constexpr int kMaxK = 4;

struct Payload {
  double x = 0.0;
  double y = 0.0;
  // Small application tuple riding with the value (e.g. chain tag plus
  // original index for polygon scans); not part of geometric operations.
  double tag = 0.0;
};

inline bool near_eq(double a, double b, double tol) {
  double d = a - b;
  return (d < 0 ? -d : d) <= tol;
}

// One read-only input value together with its 1-based scan ordinal.
struct InputElement {
  Index index = 0;
  Payload value;
};

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Engine errors (CLI exit code 3).
class ContractViolation : public Error {
 public:
  using Error::Error;
};
class OrderViolation : public Error {
 public:
  using Error::Error;
};
class EmptyStack : public Error {
 public:
  using Error::Error;
};
class ReplayDivergence : public Error {
 public:
  using Error::Error;
};
class OracleBudgetExceeded : public Error {
 public:
  using Error::Error;
};
class OracleInconsistency : public Error {
 public:
  using Error::Error;
};
class InvalidRollback : public Error {
 public:
  using Error::Error;
};

// Input/validation errors (CLI exit code 2).
class BadParameter : public Error {
 public:
  using Error::Error;
};
class NotMonotone : public Error {
 public:
  using Error::Error;
};
class PointOutside : public Error {
 public:
  using Error::Error;
};
class DegenerateInput : public Error {
 public:
  using Error::Error;
};
class NoCrossing : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Context
//
// Snapshot of the algorithm's O(1) auxiliary state. Application cells grow
// from slot 0; the engine-managed mini region (the indices of the top-k
// window as of this element's push, self first) sits at the tail of the
// same fixed buffer so that the whole snapshot stays one flat O(1) object.

class Context {
 public:
  int app_used() const { return app_used_; }
  int mini_count() const { return mini_used_; }
  int cells_used() const { return app_used_ + mini_used_; }

  void app_resize(int n) {
    check_cap(n, mini_used_);
    for (int i = app_used_; i < n; ++i) cells_[i] = 0.0;
    app_used_ = static_cast<std::uint8_t>(n);
  }
  double app(int i) const { return cells_[check_app(i)]; }
  void set_app(int i, double v) { cells_[check_app(i)] = v; }
  Index app_index(int i) const { return static_cast<Index>(cells_[check_app(i)]); }
  void set_app_index(int i, Index v) { cells_[check_app(i)] = static_cast<double>(v); }

  void set_mini(const Index* ids, int count) {
    check_cap(app_used_, count);
    mini_used_ = static_cast<std::uint8_t>(count);
    for (int j = 0; j < count; ++j) cells_[kContextCap - 1 - j] = static_cast<double>(ids[j]);
  }
  // j = 0 is the element itself, j = 1 the one below it, and so on.
  Index mini(int j) const {
    if (j < 0 || j >= mini_used_) throw ContractViolation("Context: mini slot out of range");
    return static_cast<Index>(cells_[kContextCap - 1 - j]);
  }

  friend bool operator==(const Context& a, const Context& b) {
    if (a.app_used_ != b.app_used_ || a.mini_used_ != b.mini_used_) return false;
    for (int i = 0; i < a.app_used_; ++i)
      if (a.cells_[i] != b.cells_[i]) return false;
    for (int j = 0; j < a.mini_used_; ++j)
      if (a.cells_[kContextCap - 1 - j] != b.cells_[kContextCap - 1 - j]) return false;
    return true;
  }
  friend bool operator!=(const Context& a, const Context& b) { return !(a == b); }

  Context() = default;
  Context(const Context& o) { assign(o); }
  Context& operator=(const Context& o) {
    if (this != &o) assign(o);
    return *this;
  }

 private:
  void assign(const Context& o) {
    app_used_ = o.app_used_;
    mini_used_ = o.mini_used_;
    std::memcpy(cells_.data(), o.cells_.data(), sizeof(double) * o.app_used_);
    std::memcpy(cells_.data() + (kContextCap - o.mini_used_),
                o.cells_.data() + (kContextCap - o.mini_used_), sizeof(double) * o.mini_used_);
  }
  int check_app(int i) const {
    if (i < 0 || i >= app_used_) throw ContractViolation("Context: app slot out of range");
    return i;
  }
  void check_cap(int app, int mini) const {
    if (app < 0 || mini < 0 || app + mini > kContextCap)
      throw ContractViolation("Context: capacity exceeded (CONTEXT_CAP)");
  }

  std::array<double, kContextCap> cells_{};
  std::uint8_t app_used_ = 0;
  std::uint8_t mini_used_ = 0;
};

// A stacked element together with the Context captured when it was pushed.
struct StackEntry {
  InputElement elem;
  Context ctx;
};

// ---------------------------------------------------------------------------
// Output

struct EmitRecord {
  std::int32_t tag = 0;
  std::array<Index, 2> idx{{0, 0}};
  std::array<double, 2> val{{0.0, 0.0}};
};

inline bool exact_eq(const EmitRecord& a, const EmitRecord& b) {
  return a.tag == b.tag && a.idx == b.idx && a.val == b.val;
}
inline bool tol_eq(const EmitRecord& a, const EmitRecord& b, double tol) {
  return a.tag == b.tag && a.idx == b.idx && near_eq(a.val[0], b.val[0], tol) &&
         near_eq(a.val[1], b.val[1], tol);
}

// Write-only output channel. Sinks never feed back into the algorithm.
class Sink {
 public:
  virtual ~Sink() = default;
  virtual void emit(const EmitRecord& r) = 0;
};

class NullSink final : public Sink {
 public:
  void emit(const EmitRecord&) override {}
};

class VecSink final : public Sink {
 public:
  void emit(const EmitRecord& r) override { records.push_back(r); }
  std::vector<EmitRecord> records;
};

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

inline void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffULL;
    h *= kFnvPrime;
  }
}

inline void hash_record(std::uint64_t& h, const EmitRecord& r) {
  fnv_mix(h, static_cast<std::uint64_t>(static_cast<std::uint32_t>(r.tag)));
  fnv_mix(h, static_cast<std::uint64_t>(r.idx[0]));
  fnv_mix(h, static_cast<std::uint64_t>(r.idx[1]));
  std::uint64_t b;
  std::memcpy(&b, &r.val[0], 8);
  fnv_mix(h, b);
  std::memcpy(&b, &r.val[1], 8);
  fnv_mix(h, b);
}

// Hashes every record and optionally forwards to another sink.
class HashingSink final : public Sink {
 public:
  explicit HashingSink(Sink* next = nullptr) : next_(next) {}
  void emit(const EmitRecord& r) override {
    hash_record(hash, r);
    ++count;
    if (next_) next_->emit(r);
  }
  std::uint64_t hash = kFnvOffset;
  long long count = 0;

 private:
  Sink* next_;
};

// ---------------------------------------------------------------------------
// Trace

enum class TraceKind : std::uint8_t { Push, Pop, Emit };

struct TraceEvent {
  TraceKind kind;
  Index index;       // pushed/popped element; 0 for Emit
  EmitRecord record; // valid for Emit
};

struct Trace {
  std::vector<TraceEvent> events;

  void push(Index i) { events.push_back({TraceKind::Push, i, {}}); }
  void pop(Index i) { events.push_back({TraceKind::Pop, i, {}}); }
  void emit(const EmitRecord& r) { events.push_back({TraceKind::Emit, 0, r}); }
};

inline bool operator==(const TraceEvent& a, const TraceEvent& b) {
  return a.kind == b.kind && a.index == b.index && exact_eq(a.record, b.record);
}

}  // namespace cstack
