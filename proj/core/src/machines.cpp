#include "transfinite/machines.hpp"

#include "transfinite/cycle_detector.hpp"
#include "transfinite/error.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>

namespace transfinite {

std::uint32_t tm_observe(const Snapshot& s, const Program& p) {
  std::uint32_t obs = 0;
  for (std::size_t h = 0; h < p.heads.size(); ++h)
    for (std::size_t t : p.heads[h].tapes) obs = (obs << 1) | s.tapes[t].get(s.heads[h]);
  return obs;
}

namespace {

void move_head(CellAddr& a, Move m, Family f) {
  switch (m) {
    case Move::Stay: return;
    case Move::Right: ++a.offset; return;
    case Move::Left:
      if (a.offset > 0) {
        --a.offset;
      } else if (f != Family::ITTM) {
        a = CellAddr{};
      }
      return;
  }
}

}  // namespace

StepStatus tm_step(Snapshot& s, const Program& p, WriteLog* log) {
  if (log) log->clear();
  std::uint32_t obs = tm_observe(s, p);
  const auto& rule = p.rule(s.state, obs);
  if (!rule) return StepStatus::HaltImplicit;
  std::size_t slot = 0;
  for (std::size_t h = 0; h < p.heads.size(); ++h) {
    for (std::size_t t : p.heads[h].tapes) {
      std::uint8_t bit = rule->write[slot++];
      if (s.tapes[t].get(s.heads[h]) != bit) {
        s.tapes[t].set(s.heads[h], bit);
        if (log) log->emplace_back(t, s.heads[h]);
      }
    }
  }
  for (std::size_t h = 0; h < p.heads.size(); ++h) move_head(s.heads[h], rule->move[h], p.family);
  s.time = add(s.time, Ordinal(1));
  if (p.family == Family::Delta && p.delta) {
    for (const auto& h : s.heads)
      if (!(h.ordinal() < *p.delta)) return StepStatus::Crash;
  }
  if (rule->next == kHalt) return StepStatus::HaltExplicit;
  s.state = rule->next;
  return StepStatus::Continue;
}

Snapshot tm_initial(const Program& p, const std::vector<CellAddr>& ones) {
  if (!p.is_tm()) throw PreconditionError("tm_initial: not a Turing-family program");
  Snapshot s;
  s.state = p.start;
  s.heads.assign(p.heads.size(), CellAddr{});
  s.tapes.resize(p.tape_count);
  if (!ones.empty() && p.tape_count == 0) throw PreconditionError("tm_initial: program has no tapes");
  for (const auto& a : ones) {
    if (p.family == Family::ITTM && !a.base.is_zero())
      throw PreconditionError("tm_initial: ITTM input cell " + a.str() + " is not finite");
    if (p.family == Family::Delta && p.delta && !(a.ordinal() < *p.delta))
      throw PreconditionError("tm_initial: input cell " + a.str() + " is not below delta");
    s.tapes[0].set(a, 1);
  }
  return s;
}

CellAddr unbounded_head_limit(Family f, const Ordinal& base, const std::optional<Ordinal>& delta) {
  if (f == Family::ITTM) return CellAddr{};
  Ordinal b = add(base, Ordinal::omega());
  if (f == Family::Delta && delta && !(b < *delta)) return CellAddr{};
  return CellAddr{b, 0};
}

TmModel::TmModel(Program p, Snapshot init) : p_(std::move(p)), init_(std::move(init)) {
  if (!p_.is_tm()) throw PreconditionError("TmModel: not a Turing-family program");
}

namespace {

struct Drift {
  DriftMatch m;
  std::uint64_t s = 0, period = 0;
};

struct Record {
  std::uint64_t n = 0;
  Snapshot snap;
  std::vector<std::uint64_t> lo, hi;  // head offsets over (previous record, this one]
  bool mixed = false;                 // some head changed base in that interval
};

const BitBlock& block_or_empty(const Tape& t, const Ordinal& base) {
  static const BitBlock kEmpty;
  const BitBlock* b = t.block(base);
  return b ? *b : kEmpty;
}

// Watches for head records (a head passing its furthest offset in its
// current base) and tests pairs of record snapshots for a right drift.
class DriftTracker {
public:
  static constexpr std::size_t kKeep = 64;

  DriftTracker(const Program& p, const Snapshot& y) : p_(p) {
    reset_interval(y);
    furthest_.resize(y.heads.size());
    for (std::size_t h = 0; h < y.heads.size(); ++h) furthest_[h][y.heads[h].base] = y.heads[h].offset;
  }

  std::optional<Drift> observe(std::uint64_t n, const Snapshot& cur) {
    bool record = false;
    for (std::size_t h = 0; h < cur.heads.size(); ++h) {
      const auto& a = cur.heads[h];
      if (!(a.base == base_[h])) {
        mixed_ = true;
        base_[h] = a.base;
      }
      lo_[h] = std::min(lo_[h], a.offset);
      hi_[h] = std::max(hi_[h], a.offset);
      auto [it, fresh] = furthest_[h].try_emplace(a.base, a.offset);
      if (!fresh && a.offset > it->second) {
        it->second = a.offset;
        record = true;
      }
    }
    if (!record || p_.heads.empty()) return std::nullopt;
    records_.push_back(Record{n, cur, lo_, hi_, mixed_});
    if (records_.size() > kKeep) records_.pop_front();
    reset_interval(cur);

    const Record& b = records_.back();
    std::vector<std::uint64_t> lo = b.lo, hi = b.hi;
    bool mixed = b.mixed;
    for (std::size_t i = records_.size() - 1; i-- > 0;) {
      const Record& a = records_[i];
      if (auto d = check(a, b, lo, hi, mixed)) return d;
      for (std::size_t h = 0; h < lo.size(); ++h) {
        lo[h] = std::min(lo[h], a.lo[h]);
        hi[h] = std::max(hi[h], a.hi[h]);
      }
      mixed = mixed || a.mixed;
    }
    return std::nullopt;
  }

private:
  void reset_interval(const Snapshot& s) {
    lo_.clear();
    hi_.clear();
    base_.clear();
    for (const auto& a : s.heads) {
      lo_.push_back(a.offset);
      hi_.push_back(a.offset);
      base_.push_back(a.base);
    }
    mixed_ = false;
  }

  std::optional<Drift> check(const Record& ra, const Record& rb, const std::vector<std::uint64_t>& lo,
                             const std::vector<std::uint64_t>& hi, bool mixed) const {
    if (mixed) return std::nullopt;
    auto m = match_drift(ra.snap, rb.snap, p_.heads, lo, hi);
    if (!m) return std::nullopt;
    return Drift{std::move(*m), ra.n, rb.n - ra.n};
  }

  const Program& p_;
  std::vector<std::map<Ordinal, std::uint64_t>> furthest_;
  std::deque<Record> records_;
  std::vector<std::uint64_t> lo_, hi_;
  std::vector<Ordinal> base_;
  bool mixed_ = false;
};

void lower(Tape& m, const Tape& cur, const WriteLog& log, std::size_t t) {
  for (const auto& [tt, a] : log)
    if (tt == t && cur.get(a) == 0 && m.get(a) == 1) m.set(a, 0);
}

// Least cells reached over an unbounded drift: G(c) = Ms(c) below L + d,
// min(Ms(c), G(c - d)) beyond, which turns periodic once past Ms's
// explicit part.
BitBlock drift_closure(const BitBlock& ms, std::uint64_t L, std::uint64_t d) {
  std::uint64_t q = ms.tail().size();
  std::uint64_t per = std::lcm(d, q);
  std::uint64_t end = std::max(ms.size(), L + d) + d * q + 2 * per;
  std::vector<std::uint8_t> g(end);
  for (std::uint64_t c = 0; c < end; ++c) {
    std::uint8_t v = ms.get(c);
    if (c >= L + d) v = std::min(v, g[c - d]);
    g[c] = v;
  }
  std::vector<std::uint8_t> prefix(g.begin(), g.end() - static_cast<std::ptrdiff_t>(per));
  std::vector<std::uint8_t> tail(g.end() - static_cast<std::ptrdiff_t>(per), g.end());
  return BitBlock(prefix, tail);
}

}  // namespace

ApproachResult TmModel::approach(const Snapshot& y, const Ordinal& limit_time, std::uint64_t steps,
                                 const SnapshotObserver* obs) const {
  using K = ApproachResult::Kind;
  const Program& p = p_;

  // Replays s + period steps from y and builds the limit and the summary.
  auto resolve = [&](std::uint64_t s, std::uint64_t period, const DriftMatch* dr) -> std::optional<ApproachResult> {
    Snapshot cur = y;
    WriteLog log;
    std::vector<Tape> m0 = y.tapes, ms;
    std::size_t state0 = y.state, state_s = 0;
    std::vector<CellAddr> heads0 = y.heads, heads_s;
    Snapshot A;
    if (s == 0) {
      A = cur;
      ms = cur.tapes;
      state_s = cur.state;
      heads_s = cur.heads;
    }
    for (std::uint64_t t = 0; t < s + period; ++t) {
      if (tm_step(cur, p, &log) != StepStatus::Continue)
        throw Error("TM replay diverged from the first pass");
      for (std::size_t k = 0; k < cur.tapes.size(); ++k) lower(m0[k], cur.tapes[k], log, k);
      state0 = std::min(state0, cur.state);
      for (std::size_t h = 0; h < cur.heads.size(); ++h) heads0[h] = std::min(heads0[h], cur.heads[h]);
      if (t + 1 == s) {
        A = cur;
        ms = cur.tapes;
        state_s = cur.state;
        heads_s = cur.heads;
      } else if (t + 1 > s) {
        for (std::size_t k = 0; k < cur.tapes.size(); ++k) lower(ms[k], cur.tapes[k], log, k);
        state_s = std::min(state_s, cur.state);
        for (std::size_t h = 0; h < cur.heads.size(); ++h) heads_s[h] = std::min(heads_s[h], cur.heads[h]);
      }
    }
    const Snapshot& B = cur;
    if (!dr && !B.same_configuration(A)) return std::nullopt;

    ApproachResult r;
    r.kind = K::Limit;
    Snapshot& lim = r.snapshot;
    lim.time = limit_time;
    lim.state = state_s;
    lim.heads = heads_s;
    lim.tapes = ms;
    Summary& sum = r.summary;
    sum.state = state0;
    sum.heads = heads0;
    sum.tapes = m0;

    CycleEvidence& ev = r.evidence;
    ev.level = 1;
    ev.start_time = A.time;
    ev.start_index = s;
    ev.period = period;
    if (dr) {
      ev.kind = CycleKind::RightDrift;
      ev.shift_per_period = dr->d;
      ev.stable_prefix_length = dr->L;
      ev.drift_base = dr->base;
      for (std::size_t h = 0; h < lim.heads.size(); ++h)
        if (dr->heads[h]) lim.heads[h] = unbounded_head_limit(p.family, dr->base, p.delta);
      bool wake_done = false;
      for (std::size_t t = 0; t < lim.tapes.size(); ++t) {
        if (!dr->tapes[t]) continue;
        const BitBlock& b = block_or_empty(B.tapes[t], dr->base);
        std::vector<std::uint8_t> w(dr->d);
        for (std::uint64_t i = 0; i < dr->d; ++i) w[i] = b.get(dr->L + i);
        if (!wake_done) {
          for (std::uint64_t i = 0; i < dr->d; ++i) ev.wake_values[i] = w[i];
          wake_done = true;
        }
        const BitBlock& msb = block_or_empty(ms[t], dr->base);
        lim.tapes[t].put_block(dr->base, msb.with_tail_from(dr->L, w));
        BitBlock g = drift_closure(msb, dr->L, dr->d);
        sum.tapes[t].put_block(dr->base, BitBlock::min(block_or_empty(m0[t], dr->base), g));
      }
    } else {
      ev.kind = CycleKind::ExactRepeat;
    }
    r.looping = lim.same_configuration(A);
    return r;
  };

  auto stop = [&](K kind, const Snapshot& at, std::string detail) {
    ApproachResult r;
    r.kind = kind;
    r.snapshot = at;
    r.detail = std::move(detail);
    return r;
  };

  Snapshot cur = y;
  WriteLog log;
  std::unordered_map<std::uint64_t, std::uint64_t> seen;
  DriftTracker drift(p, y);
  for (std::uint64_t n = 0;; ++n) {
    if (n > 0 && obs && *obs) (*obs)(cur, SnapshotRole::Successor, nullptr);
    std::uint64_t h = cur.config_hash();
    auto [it, fresh] = seen.try_emplace(h, n);
    if (!fresh) {
      if (auto r = resolve(it->second, n - it->second, nullptr)) return std::move(*r);
    }
    if (n > 0) {
      if (auto d = drift.observe(n, cur)) {
        if (auto r = resolve(d->s, d->period, &d->m)) return std::move(*r);
      }
    }
    if (n >= steps) return stop(K::Unresolved, cur, "step budget exhausted");
    switch (tm_step(cur, p, &log)) {
      case StepStatus::Continue: break;
      case StepStatus::HaltImplicit: return stop(K::Halted, cur, "");
      case StepStatus::HaltExplicit:
        if (obs && *obs) (*obs)(cur, SnapshotRole::Successor, nullptr);
        return stop(K::Halted, cur, "");
      case StepStatus::Crash:
        if (obs && *obs) (*obs)(cur, SnapshotRole::Successor, nullptr);
        return stop(K::Crashed, cur, "head left delta");
    }
  }
}

}  // namespace transfinite
