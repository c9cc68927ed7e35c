#pragma once

#include <cstdint>

namespace cstack {

// splitmix64. Deterministic across platforms, unlike the std distributions,
// so generated inputs and benchmark sweeps stay byte-identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi] (inclusive). Requires lo <= hi.
  std::int64_t next_range(std::int64_t lo, std::int64_t hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Derives an independent stream; used to give each run/oracle its own seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  Rng r(seed ^ (salt * 0xd1b54a32d192ed03ULL));
  return r.next_u64();
}

}  // namespace cstack
