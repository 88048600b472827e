#include "transfinite/cycle_detector.hpp"

#include "transfinite/error.hpp"
#include "transfinite/machines.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

namespace transfinite {

LimitRuleSet LimitRuleSet::of(const Program& p, Ordinal limit_time) {
  if (!p.is_tm()) throw PreconditionError("limit rule set: not a Turing-family program");
  return LimitRuleSet{p.family, p.delta, std::move(limit_time)};
}

namespace {

const BitBlock& block_or_empty(const Tape& t, const Ordinal& base) {
  static const BitBlock kEmpty;
  const BitBlock* b = t.block(base);
  return b ? *b : kEmpty;
}

bool equal_outside(const Tape& a, const Tape& b, const Ordinal& skip) {
  auto it_a = a.blocks().begin(), it_b = b.blocks().begin();
  auto next = [&](auto& it, const Tape& t) {
    while (it != t.blocks().end() && it->first == skip) ++it;
  };
  for (;;) {
    next(it_a, a);
    next(it_b, b);
    bool ea = it_a == a.blocks().end(), eb = it_b == b.blocks().end();
    if (ea || eb) return ea && eb;
    if (!(it_a->first == it_b->first) || !(it_a->second == it_b->second)) return false;
    ++it_a;
    ++it_b;
  }
}

}  // namespace

std::optional<DriftMatch> match_drift(const Snapshot& A, const Snapshot& B, const std::vector<HeadSpec>& heads,
                                      const std::vector<std::uint64_t>& lo, const std::vector<std::uint64_t>& hi) {
  if (A.state != B.state || A.heads.size() != heads.size() || B.heads.size() != heads.size()) return std::nullopt;
  DriftMatch dr;
  dr.heads.assign(A.heads.size(), false);
  dr.tapes.assign(A.tapes.size(), false);
  bool any = false;
  for (std::size_t h = 0; h < A.heads.size(); ++h) {
    const auto& x = A.heads[h];
    const auto& y = B.heads[h];
    if (!(x.base == y.base) || y.offset < x.offset) return std::nullopt;
    if (y.offset == x.offset) continue;
    std::uint64_t d = y.offset - x.offset;
    if (any && (d != dr.d || !(x.base == dr.base))) return std::nullopt;
    any = true;
    dr.d = d;
    dr.base = x.base;
    dr.heads[h] = true;
    for (std::size_t t : heads[h].tapes) dr.tapes[t] = true;
  }
  if (!any) return std::nullopt;
  dr.L = UINT64_MAX;
  for (std::size_t h = 0; h < A.heads.size(); ++h)
    if (dr.heads[h]) dr.L = std::min(dr.L, lo[h]);
  if (dr.L < 1) return std::nullopt;

  // cheap window around each drifting head first
  for (std::size_t h = 0; h < A.heads.size(); ++h) {
    if (!dr.heads[h]) continue;
    for (std::size_t t : heads[h].tapes) {
      const BitBlock& a = block_or_empty(A.tapes[t], dr.base);
      const BitBlock& b = block_or_empty(B.tapes[t], dr.base);
      for (std::uint64_t i = 0; i < 32; ++i)
        if (a.get(A.heads[h].offset + i) != b.get(B.heads[h].offset + i)) return std::nullopt;
    }
  }
  for (std::size_t h = 0; h < A.heads.size(); ++h) {
    if (dr.heads[h] || !(A.heads[h].base == dr.base)) continue;
    bool on_drift = false;
    for (std::size_t t : heads[h].tapes) on_drift = on_drift || dr.tapes[t];
    if (on_drift && hi[h] >= dr.L) return std::nullopt;
  }
  for (std::size_t t = 0; t < A.tapes.size(); ++t) {
    if (!dr.tapes[t]) {
      if (!(A.tapes[t] == B.tapes[t])) return std::nullopt;
      continue;
    }
    if (!equal_outside(A.tapes[t], B.tapes[t], dr.base)) return std::nullopt;
    const BitBlock& a = block_or_empty(A.tapes[t], dr.base);
    const BitBlock& b = block_or_empty(B.tapes[t], dr.base);
    if (!BitBlock::prefix_equal(a, b, dr.L) || !BitBlock::shifted_equal(a, dr.L, b, dr.L + dr.d))
      return std::nullopt;
  }
  return dr;
}

namespace {

bool head_bases_fixed(const std::vector<Snapshot>& h, std::size_t from, std::size_t to) {
  for (std::size_t k = from + 1; k <= to; ++k)
    for (std::size_t i = 0; i < h[k].heads.size(); ++i)
      if (!(h[k].heads[i].base == h[from].heads[i].base)) return false;
  return true;
}

void offset_range(const std::vector<Snapshot>& h, std::size_t from, std::size_t to, std::vector<std::uint64_t>& lo,
                  std::vector<std::uint64_t>& hi) {
  lo.clear();
  hi.clear();
  for (const auto& a : h[from].heads) {
    lo.push_back(a.offset);
    hi.push_back(a.offset);
  }
  for (std::size_t k = from + 1; k <= to; ++k)
    for (std::size_t i = 0; i < lo.size(); ++i) {
      lo[i] = std::min(lo[i], h[k].heads[i].offset);
      hi[i] = std::max(hi[i], h[k].heads[i].offset);
    }
}

std::optional<DriftMatch> drift_at(const std::vector<Snapshot>& h, std::size_t s, std::size_t p,
                                   const std::vector<HeadSpec>& heads) {
  if (h[s].state != h[s + p].state || !head_bases_fixed(h, s, s + p)) return std::nullopt;
  std::vector<std::uint64_t> lo, hi;
  offset_range(h, s, s + p, lo, hi);
  return match_drift(h[s], h[s + p], heads, lo, hi);
}

std::size_t first_drift_tape(const DriftMatch& dm) {
  for (std::size_t t = 0; t < dm.tapes.size(); ++t)
    if (dm.tapes[t]) return t;
  return dm.tapes.size();
}

void check_rules(const std::vector<HeadSpec>& heads, const LimitRuleSet& rules) {
  if (rules.family == Family::IBSSM) throw PreconditionError("limit rules: register machines have no heads");
  if (rules.family == Family::Delta && !rules.delta) throw PreconditionError("limit rules: delta family needs delta");
  if (rules.family != Family::Delta && rules.delta) throw PreconditionError("limit rules: delta given for non-delta family");
  for (const auto& hs : heads)
    if (hs.tapes.empty()) throw PreconditionError("limit rules: head without tapes");
}

}  // namespace

std::optional<CycleEvidence> detect_cycle(const std::vector<Snapshot>& history, std::size_t window,
                                          const std::vector<HeadSpec>& heads) {
  std::size_t n = std::min(history.size(), window);
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_hash;
  std::vector<std::uint64_t> hash(n);
  for (std::size_t i = 0; i < n; ++i) {
    hash[i] = history[i].config_hash();
    by_hash[hash[i]].push_back(i);
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t j : by_hash[hash[s]]) {
      if (j <= s || !history[j].same_configuration(history[s])) continue;
      CycleEvidence ev;
      ev.kind = CycleKind::ExactRepeat;
      ev.start_time = history[s].time;
      ev.start_index = s;
      ev.period = j - s;
      return ev;
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t p = 1; s + p < n; ++p) {
      auto dm = drift_at(history, s, p, heads);
      if (!dm) continue;
      CycleEvidence ev;
      ev.kind = CycleKind::RightDrift;
      ev.start_time = history[s].time;
      ev.start_index = s;
      ev.period = p;
      ev.shift_per_period = dm->d;
      ev.stable_prefix_length = dm->L;
      ev.drift_base = dm->base;
      const BitBlock& b = block_or_empty(history[s + p].tapes[first_drift_tape(*dm)], dm->base);
      for (std::uint64_t r = 0; r < dm->d; ++r) ev.wake_values[r] = b.get(dm->L + r);
      return ev;
    }
  }
  return std::nullopt;
}

Snapshot resolve_limit(const std::vector<Snapshot>& history, const CycleEvidence& ev,
                       const std::vector<HeadSpec>& heads, const LimitRuleSet& rules) {
  check_rules(heads, rules);
  std::size_t s = ev.start_index, p = ev.period;
  if (p == 0 || s + p >= history.size()) throw PreconditionError("resolve_limit: history shorter than the evidence");
  std::optional<DriftMatch> dm;
  if (ev.kind == CycleKind::RightDrift) {
    dm = drift_at(history, s, p, heads);
    if (!dm || dm->d != ev.shift_per_period || dm->L != ev.stable_prefix_length || !(dm->base == ev.drift_base))
      throw PreconditionError("resolve_limit: drift evidence does not hold on the history");
  } else if (!history[s].same_configuration(history[s + p])) {
    throw PreconditionError("resolve_limit: exact-repeat evidence does not hold on the history");
  }

  Snapshot lim = history[s];
  lim.time = rules.limit_time;
  std::size_t end = dm ? s + p : s + p - 1;
  for (std::size_t k = s + 1; k <= end; ++k) {
    const Snapshot& x = history[k];
    lim.state = std::min(lim.state, x.state);
    for (std::size_t h = 0; h < lim.heads.size(); ++h) lim.heads[h] = std::min(lim.heads[h], x.heads[h]);
    for (std::size_t t = 0; t < lim.tapes.size(); ++t)
      if (!(lim.tapes[t] == x.tapes[t])) lim.tapes[t] = Tape::min(lim.tapes[t], x.tapes[t]);
  }
  if (dm) {
    const Snapshot& b = history[s + p];
    for (std::size_t h = 0; h < lim.heads.size(); ++h)
      if (dm->heads[h]) lim.heads[h] = unbounded_head_limit(rules.family, dm->base, rules.delta);
    for (std::size_t t = 0; t < lim.tapes.size(); ++t) {
      if (!dm->tapes[t]) continue;
      std::vector<std::uint8_t> wake(dm->d);
      const BitBlock& bb = block_or_empty(b.tapes[t], dm->base);
      for (std::uint64_t r = 0; r < dm->d; ++r) wake[r] = bb.get(dm->L + r);
      lim.tapes[t].put_block(dm->base, block_or_empty(lim.tapes[t], dm->base).with_tail_from(dm->L, wake));
    }
  }
  return lim;
}

OracleLimit brute_liminf_oracle(const std::vector<Snapshot>& history, std::size_t period,
                                const std::vector<HeadSpec>& heads, const LimitRuleSet& rules) {
  check_rules(heads, rules);
  std::size_t n = history.size();
  if (period == 0 || n < 2 * period) throw PreconditionError("oracle: history does not show two full periods");
  std::size_t w0 = n - period;
  const Snapshot& last = history[n - 1];
  const Snapshot& prev = history[n - 1 - period];
  std::size_t nh = last.heads.size();
  if (nh != heads.size()) throw PreconditionError("oracle: head count does not match");

  std::vector<bool> escaping(nh, false);
  for (std::size_t h = 0; h < nh; ++h) {
    if (last.heads[h] == prev.heads[h]) continue;
    if (!(last.heads[h].base == prev.heads[h].base) || last.heads[h].offset < prev.heads[h].offset)
      throw PreconditionError("oracle: head " + std::to_string(h) + " is neither periodic nor escaping");
    escaping[h] = true;
  }

  OracleLimit out;
  for (std::size_t h = 0; h < nh; ++h) {
    if (!escaping[h]) continue;
    // periodicity is checked across both periods, so the horizon is too
    CellAddr lo = history[w0 - period].heads[h];
    for (std::size_t k = w0 - period; k < n; ++k) lo = std::min(lo, history[k].heads[h]);
    for (std::size_t t : heads[h].tapes) {
      auto [it, fresh] = out.horizon.try_emplace(t, lo);
      if (!fresh) it->second = std::min(it->second, lo);
    }
  }
  auto determined = [&](std::size_t t, const Ordinal& base, std::uint64_t off) {
    auto it = out.horizon.find(t);
    return it == out.horizon.end() || !(base == it->second.base) || off < it->second.offset;
  };

  Snapshot& lim = out.snapshot;
  lim = last;
  lim.time = rules.limit_time;
  for (std::size_t k = w0; k < n; ++k) {
    const Snapshot& x = history[k];
    const Snapshot& y = history[k - period];
    if (x.state != y.state) throw PreconditionError("oracle: state sequence not periodic at the end");
    for (std::size_t h = 0; h < nh; ++h)
      if (!escaping[h] && !(x.heads[h] == y.heads[h])) throw PreconditionError("oracle: head sequence not periodic");
    lim.state = std::min(lim.state, x.state);
  }
  for (std::size_t h = 0; h < nh; ++h) {
    if (escaping[h]) {
      lim.heads[h] = unbounded_head_limit(rules.family, last.heads[h].base, rules.delta);
      continue;
    }
    for (std::size_t k = w0; k < n; ++k) lim.heads[h] = std::min(lim.heads[h], history[k].heads[h]);
  }

  for (std::size_t t = 0; t < last.tapes.size(); ++t) {
    std::set<Ordinal> bases;
    for (std::size_t k = w0 - period; k < n; ++k)
      for (const auto& [b, blk] : history[k].tapes[t].blocks()) bases.insert(b);
    Tape tape;
    for (const auto& base : bases) {
      std::uint64_t size = 0, per = 1;
      for (std::size_t k = w0 - period; k < n; ++k) {
        const BitBlock& blk = block_or_empty(history[k].tapes[t], base);
        size = std::max(size, blk.size());
        per = std::lcm(per, static_cast<std::uint64_t>(blk.tail().size()));
      }
      std::vector<std::uint8_t> v(size + per, 1);
      for (std::size_t k = w0; k < n; ++k) {
        const BitBlock& blk = block_or_empty(history[k].tapes[t], base);
        const BitBlock& old = block_or_empty(history[k - period].tapes[t], base);
        for (std::uint64_t c = 0; c < v.size(); ++c) {
          std::uint8_t bit = blk.get(c);
          if (determined(t, base, c) && bit != old.get(c))
            throw PreconditionError("oracle: tape " + std::to_string(t) + " cell " + CellAddr(base, c).str() +
                                    " not periodic at the end");
          v[c] = std::min(v[c], bit);
        }
      }
      std::vector<std::uint8_t> prefix(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(size));
      std::vector<std::uint8_t> tail(v.begin() + static_cast<std::ptrdiff_t>(size), v.end());
      tape.put_block(base, BitBlock(prefix, tail));
    }
    lim.tapes[t] = std::move(tape);
  }
  return out;
}

}  // namespace transfinite
