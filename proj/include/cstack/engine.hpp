#pragma once

#include <cmath>
#include <memory>
#include <string>

#include "cstack/compressed_stack.hpp"
#include "cstack/driver.hpp"
#include "cstack/green_stack.hpp"
#include "cstack/provider.hpp"

namespace cstack {

enum class EngineKind : std::uint8_t { Plain, Compressed, Green, Hybrid };

struct EngineConfig {
  EngineKind kind = EngineKind::Plain;
  Index p = 2;     // compressed
  int s = 2;       // green
  double a = 0.5;  // hybrid

  static EngineConfig plain() { return {}; }
  static EngineConfig compressed(Index p) { return {EngineKind::Compressed, p, 0, 0.0}; }
  static EngineConfig green(int s) { return {EngineKind::Green, 0, s, 0.0}; }
  static EngineConfig hybrid(double a) { return {EngineKind::Hybrid, 0, 0, a}; }
};

struct HybridLayout {
  int green_levels = 0;  // levels 1..green_levels-1 reconstruct via the oracle
  Index p = 2;
  int lower_depth = 1;
};

// Theorem-4 parameters: h = ceil(log2(n)^a) binary top levels, then p chosen
// so the two reconstruction cost terms balance, clamped to >= 2.
inline HybridLayout hybrid_configure(Index n, double a) {
  if (!(a > 0.0 && a < 1.0)) throw BadParameter("hybrid: require 0 < a < 1");
  if (n < 16) throw BadParameter("hybrid: require n >= 16");
  double logn = std::log2(static_cast<double>(n));
  int h = static_cast<int>(std::ceil(std::pow(logn, a)));
  if (h < 1) h = 1;
  if (h > ceil_log2(n) - 1) h = ceil_log2(n) - 1;
  double loglogn = std::log2(logn);
  double logp = (logn - static_cast<double>(h)) / ((1.0 + a) * loglogn);
  Index p = static_cast<Index>(1) << static_cast<int>(std::ceil(logp > 1.0 ? logp : 1.0));
  if (p < 2) p = 2;
  Index rest = n >> h;
  if (rest < 2) rest = 2;
  if (p > rest) p = rest;
  int d = ceil_log(rest, p) - 1;
  if (d < 1) d = 1;
  HybridLayout lay;
  lay.green_levels = h;
  lay.p = p;
  lay.lower_depth = d;
  return lay;
}

// Owns one configured provider stack (plus the mini-stack adapter where the
// contract looks deeper than the provider's top).
class EngineInstance {
 public:
  EngineInstance(const EngineConfig& cfg, StackAlgorithmContract& alg, const InputAccessor& in,
                 Metrics& metrics, NeighborOracle* oracle) {
    Index n = in.size();
    switch (cfg.kind) {
      case EngineKind::Plain:
        plain_ = std::make_unique<PlainStack>(&metrics);
        logical_ = plain_.get();
        break;
      case EngineKind::Compressed: {
        Partition part = Partition::standard(n, cfg.p);
        std::vector<Strategy> strat(static_cast<size_t>(part.levels()) + 1, Strategy::Replay);
        compressed_ = std::make_unique<CompressedStack>(part, alg, in, metrics, std::move(strat),
                                                        oracle);
        mini_ = std::make_unique<MiniStack>(*compressed_, alg.top_visibility(), &metrics);
        logical_ = mini_.get();
        break;
      }
      case EngineKind::Green: {
        if (!oracle) throw BadParameter("green engine requires a neighbor oracle");
        green_ = std::make_unique<GreenStack>(n, cfg.s, alg, in, metrics, *oracle);
        logical_ = green_.get();
        break;
      }
      case EngineKind::Hybrid: {
        if (!oracle) throw BadParameter("hybrid engine requires a neighbor oracle");
        HybridLayout lay = hybrid_configure(n, cfg.a);
        std::vector<Index> fan;
        for (int i = 0; i < lay.green_levels; ++i) fan.push_back(2);
        for (int i = 0; i < lay.lower_depth; ++i) fan.push_back(lay.p);
        Partition part(n, std::move(fan));
        std::vector<Strategy> strat(static_cast<size_t>(part.levels()) + 1, Strategy::Replay);
        for (int gl = 1; gl < lay.green_levels; ++gl) strat[static_cast<size_t>(gl)] = Strategy::Lp;
        compressed_ = std::make_unique<CompressedStack>(part, alg, in, metrics, std::move(strat),
                                                        oracle);
        mini_ = std::make_unique<MiniStack>(*compressed_, alg.top_visibility(), &metrics);
        logical_ = mini_.get();
        break;
      }
    }
  }

  StackProvider& logical() { return *logical_; }
  CompressedStack* compressed() { return compressed_.get(); }
  GreenStack* green() { return green_.get(); }

 private:
  std::unique_ptr<PlainStack> plain_;
  std::unique_ptr<CompressedStack> compressed_;
  std::unique_ptr<GreenStack> green_;
  std::unique_ptr<MiniStack> mini_;
  StackProvider* logical_ = nullptr;
};

inline Trace run_with_engine(const EngineConfig& cfg, StackAlgorithmContract& alg,
                             const InputAccessor& in, Metrics& metrics, Sink& sink,
                             NeighborOracle* oracle = nullptr) {
  EngineInstance eng(cfg, alg, in, metrics, oracle);
  return run(alg, in, eng.logical(), sink);
}

}  // namespace cstack
