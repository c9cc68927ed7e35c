#include <cmath>

#include "doctest.h"
#include "support.hpp"

using namespace cstack;
using namespace cstack::test;

namespace {

bool tail_sorted(const CompressedStack& cs) {
  Index prev = 0;
  for (const SubRecord& r : cs.tail()) {
    if (r.first <= prev || r.first > r.last) return false;
    prev = r.last;
  }
  return true;
}

// Structural invariants of the hierarchy: span conformance, order and
// monotone properties over the descriptors, Nex-nonempty, containment chain.
void check_structure(const CompressedStack& cs) {
  const Partition& part = cs.partition();
  int L = part.levels();
  for (int gl = cs.from_level(); gl <= L; ++gl) {
    auto v = cs.level_view(gl);
    for (const BlockDesc* b : {v.fir, v.nex}) {
      if (!b) continue;
      if (b->has_elements()) {
        Span s = part.block_span(gl, b->top);
        CHECK(s.lo == b->span.lo);
        CHECK(s.hi == b->span.hi);
      }
      if (gl != L) CHECK(b->items.empty());
      Index prev_last = 0;
      for (const SubRecord& r : b->subs) {
        CHECK(r.first <= r.last);
        CHECK(r.first > prev_last);
        prev_last = r.last;
        CHECK(b->span.contains(r.first));
        CHECK(b->span.contains(r.last));
      }
      for (size_t i = 1; i < b->items.size(); ++i)
        CHECK(b->items[i - 1].elem.index < b->items[i].elem.index);
    }
    if (v.nex) CHECK(v.nex->has_elements());
    if (v.fir && v.fir->has_elements() && v.nex && v.nex->has_elements())
      CHECK(v.nex->top < v.fir->first_in_stack());
    if (gl > cs.from_level()) {
      auto up = cs.level_view(gl - 1);
      if (v.fir && v.fir->has_elements()) {
        REQUIRE(up.fir != nullptr);
        CHECK(up.fir->has_elements());
        CHECK(up.fir->span.contains(v.fir->span.lo));
        CHECK(up.fir->span.contains(v.fir->span.hi));
      }
      if (v.nex && v.nex->has_elements()) {
        bool in_fir = up.fir && up.fir->has_elements() && up.fir->span.contains(v.nex->span.lo) &&
                      up.fir->span.contains(v.nex->span.hi);
        bool in_nex = up.nex && up.nex->has_elements() && up.nex->span.contains(v.nex->span.lo) &&
                      up.nex->span.contains(v.nex->span.hi);
        CHECK((in_fir || in_nex));
      }
    }
  }
  CHECK(tail_sorted(cs));
  CHECK(cs.tail().size() <= static_cast<size_t>(part.fanout(1)));
}

// Runs one contract over an engine config and plain in lockstep, comparing
// every observable and the engine structure after each element.
void lockstep(StackAlgorithmContract& alg, const std::vector<double>& vals, const EngineConfig& cfg,
              NeighborOracle* oracle = nullptr, bool structural = true) {
  if (cfg.kind == EngineKind::Compressed && cfg.p > static_cast<Index>(vals.size())) return;
  auto data = scalars(vals);
  Metrics me, mp;
  VectorAccessor ine(data, &me), inp(data, &mp);
  VecSink se, sp;
  Trace te, tp;
  EngineInstance eng(cfg, alg, ine, me, oracle);
  PlainStack plain(&mp);
  Driver de(alg, ine, eng.logical(), se, &te);
  Driver dp(alg, inp, plain, sp, &tp);
  de.start();
  dp.start();
  int k = alg.top_visibility();
  while (!dp.done()) {
    de.step();
    dp.step();
    TopWindow we = eng.logical().window(ine, k);
    TopWindow wp = plain.window(inp, k);
    CHECK(we.count == wp.count);
    for (int i = 1; i <= we.count; ++i) CHECK(we.top(i)->index == wp.top(i)->index);
    if (structural && eng.compressed() != nullptr) check_structure(*eng.compressed());
    if (eng.logical().size() >= 0) CHECK(eng.logical().size() == plain.size());
  }
  de.drain();
  dp.drain();
  CHECK(same_trace(te, tp));
  CHECK(same_emits(se.records, sp.records));
  CHECK(me.max_block_charge <= 2);
}

}  // namespace

TEST_CASE("partition follows the uneven split rule") {
  CHECK(Partition::standard(81, 3).levels() == 3);
  CHECK(Partition::standard(81, 3).block_span(3, 1).len() == 3);
  CHECK(Partition::standard(81, 3).block_span(1, 80).len() == 27);

  CHECK(Partition::standard(16, 4).levels() == 1);
  CHECK(Partition::standard(16, 4).block_span(1, 5).len() == 4);

  Partition p10 = Partition::standard(10, 3);
  CHECK(p10.block_span(1, 1).len() == 4);  // 10 = 4 + 3 + 3
  CHECK(p10.block_span(1, 4).len() == 4);
  CHECK(p10.block_span(1, 5).len() == 3);
  CHECK(p10.block_span(1, 8).len() == 3);

  CHECK_THROWS_AS(Partition::standard(10, 1), BadParameter);
  CHECK_THROWS_AS(Partition::standard(10, 11), BadParameter);
}

TEST_CASE("sqrt-n configuration degenerates to one explicit level") {
  Index n = 256;
  auto p = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n))));
  Partition part = Partition::standard(n, p);
  CHECK(part.levels() == 1);
  CHECK(part.block_span(1, 1).len() == n / p);
}

TEST_CASE("first push populates every level; single pop empties cleanly") {
  NsvContract alg;
  auto data = scalars({5.0, 4.0});
  Metrics m;
  VectorAccessor in(data, &m);
  Partition part(9, {3, 3});
  std::vector<Strategy> strat(3, Strategy::Replay);
  CompressedStack cs(part, alg, in, m, strat);

  StackEntry e;
  e.elem = in.element(1);
  e.ctx.app_resize(0);
  Index ids[1] = {1};
  e.ctx.set_mini(ids, 1);
  cs.push(e);
  for (int gl = 1; gl <= 2; ++gl) {
    auto v = cs.level_view(gl);
    REQUIRE(v.fir != nullptr);
    CHECK(v.fir->top == 1);
    CHECK(v.nex == nullptr);
  }
  StackEntry out = cs.pop();
  CHECK(out.elem.index == 1);
  CHECK(out.ctx == e.ctx);
  CHECK(cs.empty());
  CHECK(m.total_charges() == 0);
  CHECK_THROWS_AS(cs.pop(), EmptyStack);
}

TEST_CASE("push rotation: new block displaces Fir into Nex") {
  NsvContract alg;
  auto data = scalars({1, 2, 3, 4});  // increasing: all retained
  Metrics m;
  VectorAccessor in(data, &m);
  Partition part = Partition::standard(9, 3);
  std::vector<Strategy> strat(static_cast<size_t>(part.levels()) + 1, Strategy::Replay);
  CompressedStack cs(part, alg, in, m, strat);
  for (Index i = 1; i <= 4; ++i) {
    StackEntry e;
    e.elem = {i, {static_cast<double>(i), 0}};
    e.ctx.app_resize(0);
    Index ids[1] = {i};
    e.ctx.set_mini(ids, 1);
    cs.push(e);
  }
  auto v = cs.level_view(1);
  REQUIRE(v.fir != nullptr);
  REQUIRE(v.nex != nullptr);
  CHECK(v.fir->span.lo == 4);
  CHECK(v.fir->top == 4);
  CHECK(v.nex->span.lo == 1);
  CHECK(v.nex->first_in_stack() == 1);
  CHECK(v.nex->top == 3);
}

TEST_CASE("nsv equivalence: exhaustive pop patterns, small n") {
  NsvContract alg;
  for (int n = 1; n <= 8; ++n) {
    for_each_pop_pattern(n, [&](const std::vector<int>& pops) {
      auto vals = nsv_input_for_pattern(pops);
      lockstep(alg, vals, EngineConfig::compressed(2));
      lockstep(alg, vals, EngineConfig::compressed(3));
    });
  }
}

TEST_CASE("nsv equivalence: random larger inputs across p") {
  NsvContract alg;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    int n = 50 + static_cast<int>(seed) * 9;
    auto vals = random_walk(n, seed * 7 + 1);
    for (Index p : {Index{2}, Index{4}, Index{16},
                    static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n))))}) {
      if (p > n) continue;
      lockstep(alg, vals, EngineConfig::compressed(p), nullptr, seed % 5 == 0);
    }
  }
}

TEST_CASE("k=2 fixture equivalence over compressed engines (mini-stack bounces)") {
  PairFixture alg;
  for (int n = 1; n <= 7; ++n) {
    for_each_pop_pattern(n, [&](const std::vector<int>& pops) {
      auto vals = nsv_input_for_pattern(pops);
      lockstep(alg, vals, EngineConfig::compressed(2), nullptr, false);
    });
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    int n = 40 + static_cast<int>(seed) * 11;
    auto vals = random_walk(n, seed + 500);
    lockstep(alg, vals, EngineConfig::compressed(2), nullptr, false);
    lockstep(alg, vals, EngineConfig::compressed(5), nullptr, false);
  }
}

TEST_CASE("a deep reconstruction happens and stays within the charge bound") {
  NsvContract alg;
  bool saw_deep_only = false;
  for_each_pop_pattern(8, [&](const std::vector<int>& pops) {
    auto vals = nsv_input_for_pattern(pops);
    if (vals.size() < 2) return;
    auto out = run_one(EngineConfig::compressed(2), alg, scalars(vals));
    CHECK(out.metrics.max_block_charge <= 2);
    const auto& per = out.metrics.charges_per_level;
    bool deep = per.size() > 2 && per[2] > 0;
    bool shallow = per.size() > 1 && per[1] > 0;
    if (deep && !shallow) saw_deep_only = true;
  });
  CHECK(saw_deep_only);
}

TEST_CASE("order and invariant properties hold on every plain trace") {
  NsvContract alg;
  for_each_pop_pattern(7, [&](const std::vector<int>& pops) {
    auto vals = nsv_input_for_pattern(pops);
    auto out = run_one(EngineConfig::plain(), alg, scalars(vals));
    std::vector<Index> stack;
    for (const auto& ev : out.trace.events) {
      if (ev.kind == TraceKind::Push) {
        CHECK((stack.empty() || ev.index > stack.back()));
        stack.push_back(ev.index);
      } else if (ev.kind == TraceKind::Pop) {
        REQUIRE(!stack.empty());
        CHECK(stack.back() == ev.index);
        stack.pop_back();
      }
    }
  });
}
