#include "cstack/compressed_stack.hpp"

#include <atomic>

#include "cstack/driver.hpp"

namespace cstack {

namespace {
std::atomic<std::uint64_t> g_engine_uid{1};
std::atomic<std::uint64_t> g_block_gen{1};
constexpr long long kBlockBase = 4;
}  // namespace

CompressedStack::CompressedStack(const Partition& part, StackAlgorithmContract& alg,
                                 const InputAccessor& in, Metrics& metrics,
                                 std::vector<Strategy> strategies, NeighborOracle* oracle,
                                 int from_level, int depth)
    : part_(part),
      alg_(alg),
      in_(in),
      metrics_(metrics),
      strategies_(std::move(strategies)),
      oracle_(oracle),
      from_(from_level),
      depth_(depth),
      uid_(g_engine_uid.fetch_add(1)) {
  int L = part_.levels();
  if (from_ < 1 || from_ > L) throw BadParameter("CompressedStack: bad level range");
  if (static_cast<int>(strategies_.size()) != L + 1)
    throw BadParameter("CompressedStack: strategy per level required");
  if (strategies_[static_cast<size_t>(L)] != Strategy::Replay)
    throw BadParameter("CompressedStack: bottom level must use replay");
  for (int gl = 1; gl <= L; ++gl)
    if (strategies_[static_cast<size_t>(gl)] == Strategy::Lp) {
      if (!oracle_) throw BadParameter("CompressedStack: Lp strategy requires an oracle");
      if (part_.fanout(gl + 1) != 2)
        throw BadParameter("CompressedStack: Lp levels require binary children");
    }
  if (depth_ > 2 * (L + 2)) throw ReplayDivergence("reconstruct: nesting too deep");
  levels_.resize(static_cast<size_t>(L - from_ + 1));
}

CompressedStack::~CompressedStack() { metrics_.cells.post(-cells_); }

CompressedStack::LevelView CompressedStack::level_view(int gl) const {
  const Level& lv = level(gl);
  LevelView v;
  if (lv.fir) v.fir = &*lv.fir;
  if (lv.nex) v.nex = &*lv.nex;
  return v;
}

SubRecord CompressedStack::make_record(int child_level, Span child_span, const StackEntry& e,
                                       std::uint64_t child_gen) {
  SubRecord r;
  r.span_lo = child_span.lo;
  r.first = r.last = e.elem.index;
  r.first_ctx = e.ctx;
  r.gen = child_gen;
  if (store_last_ctx(child_level)) {
    r.last_ctx = e.ctx;
    r.has_last_ctx = true;
  }
  return r;
}

BlockDesc CompressedStack::make_block(int gl, Span s, const StackEntry& e,
                                      std::uint64_t child_gen) {
  BlockDesc b;
  b.level = gl;
  b.span = s;
  b.top = e.elem.index;
  b.gen = g_block_gen.fetch_add(1);
  if (is_bottom(gl)) {
    b.items.push_back(e);
  } else {
    Span cs = split_step(s, part_.fanout(gl + 1), e.elem.index);
    b.subs.push_back(make_record(gl + 1, cs, e, child_gen));
  }
  return b;
}

void CompressedStack::extend_block(BlockDesc& b, int gl, Span s, const StackEntry& e,
                                   std::uint64_t child_gen) {
  b.top = e.elem.index;
  if (is_bottom(gl)) {
    b.items.push_back(e);
    post(entry_cells(e));
    return;
  }
  Span cs = split_step(s, part_.fanout(gl + 1), e.elem.index);
  if (!b.subs.empty() && b.subs.back().span_lo == cs.lo && b.subs.back().gen == child_gen) {
    SubRecord& r = b.subs.back();
    r.last = e.elem.index;
    if (r.has_last_ctx) {
      post(e.ctx.cells_used() - r.last_ctx.cells_used());
      r.last_ctx = e.ctx;
    }
  } else {
    b.subs.push_back(make_record(gl + 1, cs, e, child_gen));
    post(b.subs.back().cells());
  }
}

SubRecord CompressedStack::compress_block(const BlockDesc& b) {
  SubRecord r;
  r.span_lo = b.span.lo;
  r.gen = b.gen;
  if (!b.items.empty()) {
    r.first = b.items.front().elem.index;
    r.first_ctx = b.items.front().ctx;
    r.last = b.items.back().elem.index;
    if (store_last_ctx(b.level)) {
      r.last_ctx = b.items.back().ctx;
      r.has_last_ctx = true;
    }
  } else {
    r.first = b.subs.front().first;
    r.first_ctx = b.subs.front().first_ctx;
    r.last = b.subs.back().last;
    if (store_last_ctx(b.level)) {
      if (!b.subs.back().has_last_ctx)
        throw ReplayDivergence("compress: missing last context for Lp level");
      r.last_ctx = b.subs.back().last_ctx;
      r.has_last_ctx = true;
    }
  }
  return r;
}

void CompressedStack::push(const StackEntry& e) {
  Index i = e.elem.index;
  if (i < 1 || i > part_.n()) throw OrderViolation("push: index outside input");
  if (size_ > 0 && i <= top_index_) throw OrderViolation("push: index not above current top");

  int L = part_.levels();
  Span spans[kMaxLevels];
  Span s{1, part_.n()};
  for (int gl = 1; gl <= L; ++gl) {
    s = split_step(s, part_.fanout(gl), i);
    spans[gl] = s;
  }

  // Deepest level first so each level links its sub-record to the child
  // block's incarnation.
  std::uint64_t child_gen = 0;
  for (int gl = L; gl >= from_; --gl) {
    Level& lv = level(gl);
    Span sp = spans[gl];
    if (lv.fir && lv.fir->span.lo == sp.lo && lv.fir->has_elements()) {
      extend_block(*lv.fir, gl, sp, e, child_gen);
    } else if (lv.fir && lv.fir->span.lo == sp.lo) {
      // The block re-enters the stack: fresh incarnation, same span.
      post(-lv.fir->cells());
      *lv.fir = make_block(gl, sp, e, child_gen);
      post(lv.fir->cells());
    } else {
      if (lv.fir && lv.fir->has_elements()) {
        if (lv.nex) {
          if (gl == from_) {
            // Only the topmost level compresses the displaced Nex; lower
            // levels recover it from the level above when needed.
            tail_.push_back(compress_block(*lv.nex));
            post(tail_.back().cells());
          }
          post(-(lv.nex->cells() + kBlockBase));
          lv.nex.reset();
        }
        lv.nex = std::move(lv.fir);
        lv.fir.reset();
      } else if (lv.fir) {
        post(-(lv.fir->cells() + kBlockBase));
        lv.fir.reset();
      }
      lv.fir = make_block(gl, sp, e, child_gen);
      post(lv.fir->cells() + kBlockBase);
    }
    child_gen = lv.fir->gen;
  }
  ++size_;
  top_index_ = i;
}

const StackEntry* CompressedStack::top_entry() const {
  const Level& bl = level(part_.levels());
  const BlockDesc* b = nullptr;
  if (bl.fir && bl.fir->has_elements())
    b = &*bl.fir;
  else if (bl.nex && bl.nex->has_elements())
    b = &*bl.nex;
  if (!b || b->items.empty()) return nullptr;
  return &b->items.back();
}

BlockDesc* CompressedStack::block_of_top(int gl, Index t) {
  Level& lv = level(gl);
  if (lv.fir && lv.fir->top == t) return &*lv.fir;
  if (lv.nex && lv.nex->top == t) return &*lv.nex;
  throw ReplayDivergence("pop: level bookkeeping lost the top element");
}

void CompressedStack::propagate_top(const StackEntry& top_pair) {
  Index i = top_pair.elem.index;
  for (int gl = from_; gl < part_.levels(); ++gl) {
    Level& lv = level(gl);
    BlockDesc* b = nullptr;
    if (lv.fir && lv.fir->has_elements() && lv.fir->span.contains(i))
      b = &*lv.fir;
    else if (lv.nex && lv.nex->has_elements() && lv.nex->span.contains(i))
      b = &*lv.nex;
    else
      throw ReplayDivergence("pop: no block covers the new top");
    b->top = i;
    SubRecord& r = b->subs.back();
    r.last = i;
    if (r.has_last_ctx) {
      post(top_pair.ctx.cells_used() - r.last_ctx.cells_used());
      r.last_ctx = top_pair.ctx;
    }
  }
}

StackEntry CompressedStack::pop() {
  if (size_ == 0) throw EmptyStack("CompressedStack: pop on empty stack");
  Index t = top_index_;
  int L = part_.levels();

  Level& bl = level(L);
  BlockDesc* src = block_of_top(L, t);
  StackEntry ret = src->items.back();
  src->items.pop_back();
  post(-entry_cells(ret));
  --size_;

  if (!src->items.empty()) {
    src->top = src->items.back().elem.index;
    propagate_top(src->items.back());
    top_index_ = src->top;
    return ret;
  }

  // The explicit block drained: transmit upward, marking sub-blocks empty.
  src->top = 0;
  if (bl.nex && !bl.nex->has_elements()) {
    post(-(bl.nex->cells() + kBlockBase));
    bl.nex.reset();
  }

  // Transmit the emptiness upward: remove the drained chain's records, and
  // remember the deepest block whose remaining sub-chain tops the stack now.
  int src_level = 0;
  BlockDesc* src_block = nullptr;
  std::uint64_t trigger_gen = src->gen;
  for (int gl = L - 1; gl >= from_; --gl) {
    Level& lv = level(gl);
    BlockDesc* b = block_of_top(gl, t);
    post(-b->subs.back().cells());
    b->subs.pop_back();
    if (!b->subs.empty()) {
      b->top = b->subs.back().last;
      if (!src_block) {
        src_block = b;
        src_level = gl;
      }
      break;
    }
    b->top = 0;
    trigger_gen = b->gen;
    bool was_fir = lv.fir && b == &*lv.fir;
    if (was_fir) {
      if (!src_block && lv.nex && lv.nex->has_elements()) {
        src_block = &*lv.nex;
        src_level = gl;
      }
    } else if (lv.nex) {
      post(-(lv.nex->cells() + kBlockBase));
      lv.nex.reset();
    }
  }

  if (size_ == 0) {
    top_index_ = 0;
    return ret;
  }

  const StackEntry* te = top_entry();
  if (!te) {
    repair(src_level, src_block, trigger_gen);
    te = top_entry();
    if (!te) throw ReplayDivergence("pop: repair failed to materialize the bottom level");
  }
  propagate_top(*te);
  top_index_ = te->elem.index;
  return ret;
}

void CompressedStack::repair(int src_level, BlockDesc* src_block, std::uint64_t trigger_gen) {
  if (!src_block) {
    // Nothing materialized above: pull the topmost compressed block.
    if (tail_.empty()) throw ReplayDivergence("pop: nonempty stack with no block to reconstruct");
    SubRecord rec = tail_.back();
    tail_.pop_back();
    post(-rec.cells());
    metrics_.charge_block(rec.gen, trigger_gen);
    materialize_chain(std::move(rec), from_);
    return;
  }
  const SubRecord& rec = src_block->subs.back();
  metrics_.charge_block(rec.gen, trigger_gen);
  materialize_chain(rec, src_level + 1);
}

void CompressedStack::materialize_chain(SubRecord rec, int target_level) {
  int L = part_.levels();
  for (int gl = target_level; gl <= L; ++gl) {
    if (rec.first == rec.last) {
      materialize_single({in_.element(rec.first), rec.first_ctx}, gl, rec.gen);
      return;
    }
    if (strategies_[static_cast<size_t>(gl)] == Strategy::Replay) {
      replay_materialize(rec, gl);
      return;
    }
    metrics_.note_materialization(gl);
    BlockDesc d = green_build(rec, gl);
    Level& lv = level(gl);
    if (lv.nex) post(-(lv.nex->cells() + kBlockBase));
    lv.nex = std::move(d);
    post(lv.nex->cells() + kBlockBase);
    rec = lv.nex->subs.back();
  }
  throw ReplayDivergence("reconstruct: hit bottom with an Lp strategy");
}

void CompressedStack::materialize_single(const StackEntry& e, int target_level,
                                         std::uint64_t gen) {
  std::uint64_t child_gen = 0;
  for (int gl = part_.levels(); gl >= target_level; --gl) {
    metrics_.note_materialization(gl);
    Span s = part_.block_span(gl, e.elem.index);
    Level& lv = level(gl);
    if (lv.nex) post(-(lv.nex->cells() + kBlockBase));
    lv.nex = make_block(gl, s, e, child_gen);
    if (gl == target_level) lv.nex->gen = gen;
    post(lv.nex->cells() + kBlockBase);
    child_gen = lv.nex->gen;
  }
}

BlockDesc CompressedStack::green_build(const SubRecord& rec, int gl) {
  Span s = part_.block_span(gl, rec.first);
  if (!s.contains(rec.last)) throw ReplayDivergence("reconstruct: record spans two blocks");
  if (!rec.has_last_ctx) throw ReplayDivergence("reconstruct: Lp level lost the last context");
  Index child_fanout = part_.fanout(gl + 1);
  Span cf = split_step(s, child_fanout, rec.first);
  Span cl = split_step(s, child_fanout, rec.last);
  StackEntry b_entry{in_.element(rec.first), rec.first_ctx};
  StackEntry t_entry{in_.element(rec.last), rec.last_ctx};

  BlockDesc d;
  d.level = gl;
  d.span = s;
  d.top = rec.last;
  d.gen = rec.gen;
  if (cf.lo == cl.lo) {
    // Both boundary elements in one sub-block: the sibling is empty and the
    // block reassembles with no oracle call.
    SubRecord r = rec;
    r.span_lo = cf.lo;
    if (!store_last_ctx(gl + 1)) r.has_last_ctx = false;
    d.subs.push_back(std::move(r));
    return d;
  }
  // One query with the treating element taken as a_t: the stack below a_t at
  // its push time equals the current slice, so survivors match.
  NeighborResult r =
      call_lp(*oracle_, t_entry.elem, nullptr, t_entry, b_entry, cf.hi, in_, metrics_);
  if (!r.lower.present || !r.upper.present)
    throw OracleInconsistency("reconstruct: lp returned no boundary inside [b, t]");

  SubRecord lowrec;
  lowrec.span_lo = cf.lo;
  lowrec.first = rec.first;
  lowrec.first_ctx = rec.first_ctx;
  lowrec.last = r.lower.entry.elem.index;
  if (store_last_ctx(gl + 1)) {
    lowrec.last_ctx = r.lower.entry.ctx;
    lowrec.has_last_ctx = true;
  }
  SubRecord hirec;
  hirec.span_lo = cl.lo;
  hirec.first = r.upper.entry.elem.index;
  hirec.first_ctx = r.upper.entry.ctx;
  hirec.last = rec.last;
  if (store_last_ctx(gl + 1)) {
    hirec.last_ctx = rec.last_ctx;
    hirec.has_last_ctx = true;
  }
  d.subs.push_back(std::move(lowrec));
  d.subs.push_back(std::move(hirec));
  return d;
}

void CompressedStack::replay_materialize(const SubRecord& rec, int target_level) {
  CompressedStack aux(part_, alg_, in_, metrics_, strategies_, oracle_, target_level, depth_ + 1);
  StackEntry bottom{in_.element(rec.first), rec.first_ctx};
  int k = alg_.top_visibility();
  MiniStack logical(aux, k, &metrics_);
  if (k == 1)
    aux.push(bottom);
  else
    logical.seed(bottom);

  NullSink sink;
  Driver d(alg_, in_, logical, sink, nullptr);
  d.seed(bottom);
  try {
    while (aux.top_index() != rec.last) {
      if (d.done())
        throw ReplayDivergence("reconstruct: input exhausted before a_t reappeared");
      ++metrics_.replayed_elements;
      d.step();
    }
  } catch (const EmptyStack&) {
    throw ReplayDivergence("reconstruct: auxiliary stack underflow (non-deterministic contract?)");
  }
  harvest(aux, target_level);
  level(target_level).nex->gen = rec.gen;
}

void CompressedStack::harvest(CompressedStack& aux, int target_level) {
  if (!aux.tail_.empty()) throw ReplayDivergence("reconstruct: auxiliary stack overflowed a block");
  for (int gl = target_level; gl <= part_.levels(); ++gl) {
    metrics_.note_materialization(gl);
    Level& alv = aux.level(gl);
    std::optional<BlockDesc>* srcp = nullptr;
    if (alv.fir && alv.fir->has_elements())
      srcp = &alv.fir;
    else if (alv.nex && alv.nex->has_elements())
      srcp = &alv.nex;
    if (!srcp) throw ReplayDivergence("reconstruct: auxiliary stack missing a level");
    long long c = (*srcp)->cells() + kBlockBase;
    aux.post(-c);
    Level& lv = level(gl);
    if (lv.nex) post(-(lv.nex->cells() + kBlockBase));
    lv.nex = std::move(**srcp);
    srcp->reset();
    post(c);
  }
}

}  // namespace cstack
