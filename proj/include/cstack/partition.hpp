#pragma once

#include <vector>

#include "cstack/core.hpp"

namespace cstack {

// Deep enough for any input this side of 2^60 elements.
constexpr int kMaxLevels = 64;

struct Span {
  Index lo = 0;
  Index hi = 0;
  Index len() const { return hi - lo + 1; }
  bool contains(Index i) const { return i >= lo && i <= hi; }
};

// One uneven split step: [lo..hi] divides into up to `fanout` consecutive
// blocks, the first (len mod fanout) of size ceil(len/fanout), the rest of
// size floor(len/fanout). Returns the sub-span containing i.
inline Span split_step(Span s, Index fanout, Index i) {
  Index m = s.len();
  Index p = fanout < m ? fanout : m;
  if (p <= 1) return s;
  Index q = m / p;
  Index r = m % p;
  Index off = i - s.lo;
  Index big = q + 1;
  if (off < r * big) {
    Index b = off / big;
    return {s.lo + b * big, s.lo + (b + 1) * big - 1};
  }
  Index off2 = off - r * big;
  Index b = off2 / q;
  Index lo = s.lo + r * big + b * q;
  return {lo, lo + q - 1};
}

// smallest t with p^t >= n
inline int ceil_log(Index n, Index p) {
  int t = 0;
  Index v = 1;
  while (v < n) {
    v *= p;
    ++t;
  }
  return t;
}

inline int ceil_log2(Index n) { return ceil_log(n, 2); }

// Per-level fanouts of the block hierarchy over inputs 1..n. Blocks of the
// last level are the ones an engine stores explicitly.
class Partition {
 public:
  Partition() = default;
  Partition(Index n, std::vector<Index> fanouts) : n_(n), fanouts_(std::move(fanouts)) {
    if (levels() >= kMaxLevels) throw BadParameter("Partition: too many levels");
    for (Index f : fanouts_)
      if (f < 2) throw BadParameter("Partition: fanout must be >= 2");
  }

  Index n() const { return n_; }
  int levels() const { return static_cast<int>(fanouts_.size()); }
  Index fanout(int level) const { return fanouts_[level - 1]; }

  Span block_span(int level, Index i) const {
    Span s{1, n_};
    for (int l = 1; l <= level; ++l) s = split_step(s, fanouts_[l - 1], i);
    return s;
  }

  // Standard layout: h = max(1, ceil(log_p n) - 1) levels of fanout p.
  static Partition standard(Index n, Index p) {
    if (p < 2 || p > n) throw BadParameter("compressed stack: require 2 <= p <= n");
    int h = ceil_log(n, p) - 1;
    if (h < 1) h = 1;
    return Partition(n, std::vector<Index>(static_cast<size_t>(h), p));
  }

 private:
  Index n_ = 0;
  std::vector<Index> fanouts_;
};

}  // namespace cstack
