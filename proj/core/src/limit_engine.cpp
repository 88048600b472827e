#include "transfinite/limit_engine.hpp"

#include "transfinite/error.hpp"

#include <algorithm>

namespace transfinite {

// ------------------------------------------------------------ ValueSummary

void ValueSummary::add_code(const StructuredCode& c) {
  BssValue probe(c);
  auto h = probe.hash();
  auto& bucket = index_[h];
  for (auto i : bucket)
    if (codes_[i] == c) return;
  bucket.push_back(codes_.size());
  codes_.push_back(c);
}

void ValueSummary::add(const BssValue& v) {
  if (v.is_rational()) {
    if (!rational_min_ || v.rational() < *rational_min_) rational_min_ = v.rational();
  } else {
    add_code(v.code());
  }
}

void ValueSummary::merge(const ValueSummary& o) {
  if (o.rational_min_ && (!rational_min_ || *o.rational_min_ < *rational_min_)) rational_min_ = o.rational_min_;
  for (const auto& c : o.codes_) add_code(c);
}

BssValue ValueSummary::min_under(const std::set<std::uint64_t>& emptied) const {
  std::optional<BssValue> best;
  if (rational_min_) best = BssValue(*rational_min_);
  for (const auto& c : codes_) {
    BssValue v = emptied.empty() ? BssValue(c) : BssValue(c.emptied(emptied));
    if (!best || compare_values(v, *best) < 0) best = std::move(v);
  }
  if (!best) throw PreconditionError("empty value summary");
  return *best;
}

// ----------------------------------------------------------------- Summary

Summary Summary::of(const Snapshot& s) {
  Summary out;
  out.state = s.state;
  out.heads = s.heads;
  out.tapes = s.tapes;
  out.registers.resize(s.registers.size());
  for (std::size_t r = 0; r < s.registers.size(); ++r) out.registers[r].add(s.registers[r]);
  out.constant.assign(s.registers.size(), true);
  out.first = s.registers;
  return out;
}

void Summary::absorb(const Snapshot& s) {
  state = std::min(state, s.state);
  for (std::size_t h = 0; h < heads.size(); ++h) heads[h] = std::min(heads[h], s.heads[h]);
  for (std::size_t t = 0; t < tapes.size(); ++t)
    if (!(tapes[t] == s.tapes[t])) tapes[t] = Tape::min(tapes[t], s.tapes[t]);
  for (std::size_t r = 0; r < registers.size(); ++r) {
    registers[r].add(s.registers[r]);
    if (constant[r] && !(s.registers[r] == first[r])) constant[r] = false;
  }
}

void Summary::absorb(const Summary& o) {
  state = std::min(state, o.state);
  for (std::size_t h = 0; h < heads.size(); ++h) heads[h] = std::min(heads[h], o.heads[h]);
  for (std::size_t t = 0; t < tapes.size(); ++t)
    if (!(tapes[t] == o.tapes[t])) tapes[t] = Tape::min(tapes[t], o.tapes[t]);
  for (std::size_t r = 0; r < registers.size(); ++r) {
    registers[r].merge(o.registers[r]);
    constant[r] = constant[r] && o.constant[r] && o.first[r] == first[r];
  }
}

// -------------------------------------------------------------------- time

Ordinal advance_time(const Ordinal& t0, unsigned level) {
  if (level == 0) throw PreconditionError("limit level must be positive");
  Ordinal e(static_cast<std::uint64_t>(level));
  return add(truncate_below(t0, e), omega_pow(e));
}

Ordinal advance_time(const Ordinal& t0, const CycleEvidence& /*ev*/, unsigned level) {
  return advance_time(t0, level);
}

// ------------------------------------------------------------------ engine

namespace {

using Drift = std::map<std::size_t, std::set<std::uint64_t>>;

std::uint64_t meta_key(const Snapshot& s) {
  std::uint64_t h = mix64(s.state + 0x77);
  for (const auto& a : s.heads) h = mix64(h ^ (a.base.hash() * 31 + a.offset));
  for (std::size_t i = 0; i < s.tapes.size(); ++i) h = mix64(h + s.tapes[i].hash() * (2 * i + 3));
  for (std::size_t i = 0; i < s.registers.size(); ++i) h = mix64(h + s.registers[i].abstract_hash() * (2 * i + 5));
  return h;
}

// Segments from a and from b behave alike, b's code blocks only further
// right.  Returns the blocks that moved, per register.
std::optional<Drift> meta_match(const Snapshot& a, const Snapshot& b, const std::vector<Summary>& sums,
                                std::size_t from) {
  if (a.state != b.state || a.heads != b.heads || a.tapes != b.tapes) return std::nullopt;
  if (a.registers.size() != b.registers.size()) return std::nullopt;
  Drift drift;
  bool exact = true;
  for (std::size_t r = 0; r < a.registers.size(); ++r) {
    const auto& x = a.registers[r];
    const auto& y = b.registers[r];
    if (x == y) continue;
    exact = false;
    if (x.is_rational() || y.is_rational() || !x.abstract_equal(y)) return std::nullopt;
    std::set<std::uint64_t> keys;
    for (const auto& kv : x.code().blocks) keys.insert(kv.first);
    for (const auto& kv : y.code().blocks) keys.insert(kv.first);
    for (auto blk : keys) {
      auto sa = x.code().shift(blk);
      auto sb = y.code().shift(blk);
      if (!sa || !sb || sa == sb) continue;
      if (*sb < *sa) return std::nullopt;
      drift[r].insert(blk);
    }
  }
  if (exact) return drift;
  if (a.code_reads != b.code_reads) return std::nullopt;
  // the moving blocks never sit left of where they started
  for (const auto& [r, blocks] : drift) {
    for (auto blk : blocks) {
      auto start = *a.registers[r].code().shift(blk);
      for (std::size_t m = from; m < sums.size(); ++m)
        for (const auto& c : sums[m].registers[r].codes()) {
          auto s = c.shift(blk);
          if (s && *s < start) return std::nullopt;
        }
    }
  }
  return drift;
}

class Engine {
public:
  Engine(const MachineModel& m, const Budget& b, const SnapshotObserver& obs, bool looping, unsigned top)
      : m_(m), budget_(b), obs_(obs ? &obs : nullptr), looping_(looping), top_(top) {}

  struct SegOut {
    bool terminal = false;
    Snapshot limit;
    Summary summary;
    CycleEvidence ev;
    RunResult result;
  };

  SegOut segment(const Snapshot& y, unsigned level) {
    return level == 1 ? approach(y) : meta(y, level);
  }

  // Commits a limit snapshot; false (with `out` filled) when the budget is spent.
  bool commit(const Snapshot& x, const CycleEvidence& ev, SegOut& out) {
    if (committed_ >= budget_.snaps) {
      out = terminal(Outcome::Unresolved, x, "snapshot budget exhausted");
      return false;
    }
    ++committed_;
    if (obs_) (*obs_)(x, SnapshotRole::Limit, &ev);
    return true;
  }

  std::uint64_t committed() const noexcept { return committed_; }
  bool r0_settled() const noexcept { return r0_settled_; }

  SegOut terminal(Outcome o, const Snapshot& at, std::string detail) const {
    SegOut out;
    out.terminal = true;
    out.result.outcome = o;
    out.result.time = at.time;
    out.result.final = at;
    out.result.detail = std::move(detail);
    return out;
  }

private:
  SegOut approach(const Snapshot& y) {
    Ordinal limit_time = add(y.time, Ordinal::omega());
    ApproachResult a = m_.approach(y, limit_time, budget_.steps, obs_);
    r0_settled_ = a.r0_settled;
    using K = ApproachResult::Kind;
    switch (a.kind) {
      case K::Limit: {
        if (looping_ && a.looping) {
          SegOut out = terminal(Outcome::Looping, a.snapshot, "");
          out.result.evidence = a.evidence;
          return out;
        }
        SegOut out;
        out.limit = std::move(a.snapshot);
        out.summary = std::move(a.summary);
        out.ev = std::move(a.evidence);
        return out;
      }
      case K::Halted: return terminal(Outcome::Halted, a.snapshot, a.detail);
      case K::Crashed: return terminal(Outcome::Crashed, a.snapshot, a.detail);
      case K::Violation: return terminal(Outcome::ContinuityViolation, a.snapshot, a.detail);
      case K::Unresolved: return terminal(Outcome::Unresolved, a.snapshot, a.detail);
    }
    return terminal(Outcome::Unresolved, a.snapshot, "unknown approach outcome");
  }

  SegOut meta(const Snapshot& y, unsigned level) {
    std::vector<Snapshot> xs;
    std::vector<Summary> sums;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> keys;
    Snapshot x = y;
    for (;;) {
      auto key = meta_key(x);
      if (auto it = keys.find(key); it != keys.end()) {
        for (auto i : it->second)
          if (auto drift = meta_match(xs[i], x, sums, i)) return finish(y, level, xs, sums, i, x, *drift);
      }
      keys[key].push_back(xs.size());
      xs.push_back(x);
      SegOut sub = segment(x, level - 1);
      if (sub.terminal) return sub;
      sums.push_back(std::move(sub.summary));
      SegOut fail;
      if (!commit(sub.limit, sub.ev, fail)) return fail;
      x = std::move(sub.limit);
    }
  }

  SegOut finish(const Snapshot& y, unsigned level, const std::vector<Snapshot>& xs,
                const std::vector<Summary>& sums, std::size_t i, const Snapshot& xj, const Drift& drift) {
    std::size_t j = xs.size();
    Snapshot lim;
    lim.time = add(y.time, omega_pow(Ordinal(static_cast<std::uint64_t>(level))));
    lim.code_reads = xj.code_reads;
    const Summary& s0 = sums[i];
    lim.state = s0.state;
    lim.heads = s0.heads;
    lim.tapes = s0.tapes;
    for (std::size_t m = i + 1; m < j; ++m) {
      lim.state = std::min(lim.state, sums[m].state);
      for (std::size_t h = 0; h < lim.heads.size(); ++h) lim.heads[h] = std::min(lim.heads[h], sums[m].heads[h]);
      for (std::size_t t = 0; t < lim.tapes.size(); ++t)
        if (!(lim.tapes[t] == sums[m].tapes[t])) lim.tapes[t] = Tape::min(lim.tapes[t], sums[m].tapes[t]);
    }
    static const std::set<std::uint64_t> kNone;
    for (std::size_t r = 0; r < xj.registers.size(); ++r) {
      auto dit = drift.find(r);
      const auto& blocks = dit == drift.end() ? kNone : dit->second;
      if (m_.continuity()) {
        bool ok = blocks.empty();
        for (std::size_t m = i; m < j && ok; ++m) ok = sums[m].constant[r] && sums[m].first[r] == sums[i].first[r];
        if (!ok) {
          lim.registers = xj.registers;
          return terminal(Outcome::ContinuityViolation, lim,
                          "register r" + std::to_string(r) + " does not converge");
        }
        lim.registers.push_back(sums[i].first[r]);
      } else {
        std::optional<BssValue> best;
        for (std::size_t m = i; m < j; ++m) {
          BssValue v = sums[m].registers[r].min_under(blocks);
          if (!best || compare_values(v, *best) < 0) best = std::move(v);
        }
        lim.registers.push_back(std::move(*best));
      }
    }

    SegOut out;
    out.ev.kind = drift.empty() ? CycleKind::ExactRepeat : CycleKind::RightDrift;
    out.ev.level = level;
    out.ev.start_time = xs[i].time;
    out.ev.start_index = i;
    out.ev.period = j - i;
    for (const auto& [r, blocks] : drift) out.ev.drifting_blocks[r] = {blocks.begin(), blocks.end()};

    if (looping_ && lim.same_configuration(xs[i])) {
      SegOut loop = terminal(Outcome::Looping, lim, "");
      loop.result.evidence = out.ev;
      return loop;
    }
    if (level >= top_) {
      SegOut cap = terminal(Outcome::Unresolved, lim, "limit level cap");
      cap.result.evidence = out.ev;
      cap.result.final = xs.back();
      return cap;
    }

    Summary total = sums[0];
    for (std::size_t m = 1; m < j; ++m) total.absorb(sums[m]);
    for (const auto& [r, blocks] : drift) {
      total.constant[r] = false;
      for (std::size_t m = i; m < j; ++m)
        for (const auto& c : sums[m].registers[r].codes()) total.registers[r].add(BssValue(c.emptied(blocks)));
    }
    total.first = y.registers;
    out.limit = std::move(lim);
    out.summary = std::move(total);
    return out;
  }

  const MachineModel& m_;
  Budget budget_;
  const SnapshotObserver* obs_;
  bool looping_;
  unsigned top_;
  std::uint64_t committed_ = 0;
  bool r0_settled_ = false;
};

}  // namespace

RunResult run_machine(const MachineModel& m, const Budget& b, const SnapshotObserver& obs) {
  b.validate();
  if (b.level > 64) throw PreconditionError("limit level too large");
  Engine e(m, b, obs, true, static_cast<unsigned>(b.level) + 1);
  Snapshot init = m.initial();
  if (obs) obs(init, SnapshotRole::Initial, nullptr);
  auto out = e.segment(init, static_cast<unsigned>(b.level) + 1);
  RunResult r = out.terminal ? std::move(out.result) : RunResult{};
  if (!out.terminal) {
    r.outcome = Outcome::Unresolved;
    r.time = out.limit.time;
    r.final = out.limit;
  }
  r.limits = e.committed();
  r.r0_settled = e.r0_settled();
  return r;
}

UntilResult run_until(const MachineModel& m, const Ordinal& alpha, const Budget& b, const SnapshotObserver& obs) {
  b.validate();
  Engine e(m, b, obs, false, static_cast<unsigned>(-1));
  UntilResult res;
  Snapshot x = m.initial();
  if (obs) obs(x, SnapshotRole::Initial, nullptr);
  for (const auto& term : alpha.terms()) {
    auto level = term.exponent.to_u64();
    if (!level || *level > 64) throw PreconditionError("run_until: exponent out of range in " + alpha.str());
    for (BigInt c = 0; c < term.coefficient; ++c) {
      if (*level == 0) {
        // one successor step: a level-1 approach observed for a single step
        Ordinal target = add(x.time, Ordinal(1));
        Snapshot next;
        bool got = false;
        SnapshotObserver grab = [&](const Snapshot& s, SnapshotRole role, const CycleEvidence*) {
          if (!got && role == SnapshotRole::Successor && s.time == target) {
            next = s;
            got = true;
          }
        };
        ApproachResult a = m.approach(x, add(x.time, Ordinal::omega()), 1, &grab);
        if (!got) {
          res.stop = e.terminal(a.kind == ApproachResult::Kind::Halted ? Outcome::Halted
                                : a.kind == ApproachResult::Kind::Crashed ? Outcome::Crashed
                                                                          : Outcome::Unresolved,
                                a.snapshot, a.detail)
                         .result;
          return res;
        }
        if (obs) obs(next, SnapshotRole::Successor, nullptr);
        x = std::move(next);
        continue;
      }
      auto out = e.segment(x, static_cast<unsigned>(*level));
      if (out.terminal) {
        res.stop = std::move(out.result);
        res.stop.limits = e.committed();
        return res;
      }
      Engine::SegOut fail;
      if (!e.commit(out.limit, out.ev, fail)) {
        res.stop = std::move(fail.result);
        return res;
      }
      x = std::move(out.limit);
    }
  }
  res.reached = true;
  res.snapshot = std::move(x);
  return res;
}

}  // namespace transfinite
