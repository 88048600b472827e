#include "transfinite/translate.hpp"

#include "transfinite/error.hpp"
#include "transfinite/ittm.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace transfinite {

BssValue encode_tape(const CellBits& bits, const std::map<std::uint64_t, std::uint64_t>& shifts) {
  StructuredCode c = StructuredCode::initial();
  for (const auto& [i, k] : shifts) {
    auto it = bits.find(i);
    std::uint8_t bit = it == bits.end() ? 0 : it->second;
    if (k % 2 != bit)
      throw PreconditionError("cell " + std::to_string(i) + " holds " + std::to_string(bit) + " but its shift is " +
                              std::to_string(k));
    c.set_shift(i, k);
  }
  for (const auto& [i, bit] : bits) {
    if (bit > 1) throw PreconditionError("cell values are bits");
    if (bit == 1 && !shifts.count(i)) c.set_shift(i, 1);
  }
  return BssValue(std::move(c));
}

CellBits decode_register(const BssValue& v) {
  if (!v.is_code()) throw PreconditionError("register holds a rational, not a tape code");
  const auto& c = v.code();
  if (!c.conforming()) throw PreconditionError("register is not a conforming tape code");
  CellBits out;
  for (const auto& [i, s] : c.blocks)
    if (s && *s % 2 == 1) out[i] = 1;
  return out;
}

CellBits cells_of(const std::vector<Tape>& tapes) {
  CellBits out;
  for (std::size_t t = 0; t < tapes.size(); ++t) {
    for (const auto& [base, blk] : tapes[t].blocks()) {
      if (!base.is_zero() || blk.tail() != std::vector<std::uint8_t>{0})
        throw PreconditionError("tape " + std::to_string(t) + " is not finite");
      for (std::uint64_t k = 0; k < blk.size(); ++k)
        if (blk.get(k)) out[cell_index(t, k)] = 1;
    }
  }
  return out;
}

std::vector<Tape> tapes_of(const CellBits& bits, std::size_t tape_count) {
  std::vector<Tape> tapes(tape_count);
  for (const auto& [i, bit] : bits) {
    if (!bit) continue;
    std::size_t t = i % 3;
    if (t >= tape_count) throw PreconditionError("cell " + std::to_string(i) + " lies on a missing tape");
    tapes[t].set(CellAddr(Ordinal(), i / 3), 1);
  }
  return tapes;
}

Rational naive_encode(const CellBits& bits) {
  Rational v(0), w(1, 10);
  std::uint64_t at = 0;
  for (const auto& [i, bit] : bits) {
    for (; at < i; ++at) w /= 10;
    if (bit) v += w;
  }
  return v;
}

namespace {

// Flow chart under construction; targets are labels resolved at the end.
class ChartBuilder {
public:
  static constexpr const char* kNext = "";
  static constexpr const char* kHaltLabel = "halt";

  void label(const std::string& name) {
    if (!labels_.emplace(name, nodes_.size()).second) throw Error("compiler: duplicate label " + name);
  }

  void node(BssNode n, std::string next = kNext, std::string alt = kNext) {
    nodes_.push_back(std::move(n));
    targets_.emplace_back(std::move(next), std::move(alt));
  }

  void op(Op o, std::vector<std::size_t> regs, std::string next = kNext) {
    BssNode n;
    n.op = o;
    n.regs = std::move(regs);
    node(std::move(n), std::move(next));
  }
  void constant(std::size_t r, long v, std::string next = kNext) {
    BssNode n;
    n.op = Op::Const;
    n.regs = {r};
    n.constant = Rational(v);
    node(std::move(n), std::move(next));
  }
  void branch(std::size_t a, std::size_t b, std::string le, std::string gt) {
    BssNode n;
    n.op = Op::Branch;
    n.regs = {a, b};
    node(std::move(n), std::move(le), std::move(gt));
  }
  void digit(Op o, std::vector<std::size_t> regs, std::uint64_t stride, std::uint64_t offset,
             std::string next = kNext) {
    BssNode n;
    n.op = o;
    n.regs = std::move(regs);
    n.stride = stride;
    n.offset = offset;
    node(std::move(n), std::move(next));
  }

  std::size_t at(const std::string& name) const { return labels_.at(name); }

  std::vector<BssNode> finish() {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      auto resolve = [&](const std::string& l) -> std::size_t {
        if (l == kNext) return i + 1;
        if (l == kHaltLabel) return kHalt;
        auto it = labels_.find(l);
        if (it == labels_.end()) throw Error("compiler: unknown label " + l);
        return it->second;
      };
      auto& n = nodes_[i];
      if (n.op == Op::Halt) continue;
      n.next = resolve(targets_[i].first);
      if (n.op == Op::Branch) n.alt = resolve(targets_[i].second);
    }
    return nodes_;
  }

private:
  std::vector<BssNode> nodes_;
  std::vector<std::pair<std::string, std::string>> targets_;
  std::map<std::string, std::size_t> labels_;
};

void require_compilable(const Program& p) {
  auto bad = [&](const std::string& why) { return PreconditionError("cannot compile " + p.name + ": " + why); };
  if (p.family != Family::ITTM) throw bad("only ittm programs compile");
  if (p.heads.size() != 1) throw bad("only single-head programs compile");
  if (p.tape_count > 3) throw bad("at most three tapes");
  std::vector<std::size_t> ts = p.heads[0].tapes;
  std::sort(ts.begin(), ts.end());
  if (std::adjacent_find(ts.begin(), ts.end()) != ts.end()) throw bad("head reads a tape twice");
}

// Longest run of nodes from `from` until node 0 or a halt comes round.
std::size_t longest_step(const std::vector<BssNode>& nodes) {
  std::vector<std::size_t> memo(nodes.size(), 0);
  std::vector<bool> done(nodes.size(), false);
  std::function<std::size_t(std::size_t)> go = [&](std::size_t i) -> std::size_t {
    if (i == kHalt || i == 0) return 0;
    if (done[i]) return memo[i];
    const auto& n = nodes[i];
    std::size_t best = 0;
    if (n.op != Op::Halt) {
      best = go(n.next);
      if (n.op == Op::Branch) best = std::max(best, go(n.alt));
    }
    done[i] = true;
    return memo[i] = best + 1;
  };
  const auto& d = nodes[0];
  return 1 + std::max(go(d.next), go(d.alt));
}

}  // namespace

Program compile_ittm_to_ibssm(const Program& p) {
  require_compilable(p);
  namespace R = reg;
  const auto& slots = p.heads[0].tapes;
  const std::size_t w = slots.size();
  const std::size_t n = p.states.size();
  ChartBuilder b;

  b.label("D");
  b.branch(R::stepped, R::zero, "LIMIT", "DISPATCH");
  b.label("LIMIT");
  b.branch(R::started, R::zero, "INIT", "REPAIR");
  b.label("INIT");
  b.op(Op::DInit, {R::code});
  b.constant(R::started, 1);
  b.constant(R::one, 1);
  b.constant(R::state, static_cast<long>(p.start), "DISPATCH");

  // after a limit: refill emptied blocks, recover the head from head_frac
  std::uint64_t mask = 0;
  auto writable = p.writable_tapes();
  for (std::size_t t = 0; t < writable.size(); ++t)
    if (writable[t]) mask |= std::uint64_t{1} << t;
  b.label("REPAIR");
  b.digit(Op::DReset, {R::code}, 3, mask);
  b.branch(R::one, R::head_frac, "R_OFF", "R_HEAD");
  b.label("R_OFF");
  b.constant(R::head_frac, 0, "R_HEAD");
  b.label("R_HEAD");
  b.branch(R::head_frac, R::zero, "R_ZERO", "R_POS");
  b.label("R_ZERO");
  b.constant(R::head_inv, 0, "DISPATCH");
  b.label("R_POS");
  b.op(Op::Sub, {R::temp, R::one, R::head_frac});
  b.op(Op::Div, {R::head_inv, R::temp, R::head_frac});
  b.constant(R::temp, 0, "DISPATCH");

  b.label("DISPATCH");
  b.constant(R::stepped, 0);
  for (std::size_t s = 0; s < w; ++s) b.digit(Op::DRead, {R::read0 + s, R::code, R::head_inv}, 3, slots[s]);
  auto state_label = [](std::size_t q) { return "S" + std::to_string(q); };
  for (std::size_t q = 0; q + 1 < n; ++q) {
    b.constant(R::temp, static_cast<long>(q));
    b.branch(R::state, R::temp, state_label(q), q + 2 < n ? std::string(ChartBuilder::kNext) : state_label(n - 1));
  }
  if (n == 1) b.constant(R::temp, 0, state_label(0));

  auto leaf_label = [](std::size_t q, std::uint32_t obs) { return "A" + std::to_string(q) + "_" + std::to_string(obs); };
  for (std::size_t q = 0; q < n; ++q) {
    b.label(state_label(q));
    b.constant(R::temp, 0);
    // observation tree: slot s decided at depth s, prefix holds the bits so far
    std::function<void(std::size_t, std::uint32_t)> tree = [&](std::size_t s, std::uint32_t prefix) {
      auto sub = [&](std::uint32_t bits, std::size_t depth) {
        return depth == w ? leaf_label(q, bits) : "T" + std::to_string(q) + "_" + std::to_string(depth) + "_" +
                                                      std::to_string(bits);
      };
      if (s == w) return;
      if (s > 0) b.label(sub(prefix, s));
      b.branch(R::read0 + s, R::zero, sub(prefix << 1, s + 1), sub((prefix << 1) | 1, s + 1));
      tree(s + 1, prefix << 1);
      tree(s + 1, (prefix << 1) | 1);
    };
    tree(0, 0);
  }

  for (std::size_t q = 0; q < n; ++q) {
    for (std::uint32_t obs = 0; obs < (1U << w); ++obs) {
      std::string base = leaf_label(q, obs);
      b.label(base);
      const auto& rule = p.rule(q, obs);
      if (!rule) {
        b.constant(R::temp, 0, "IMPLICIT_HALT");
        continue;
      }
      for (std::size_t s = 0; s < w; ++s) {
        std::uint8_t seen = (obs >> (w - 1 - s)) & 1U;
        if (rule->write[s] != seen) b.digit(Op::DMove, {R::code, R::head_inv}, 3, slots[s]);
      }
      std::string end = base + "_end";
      switch (rule->move[0]) {
        case Move::Stay: break;
        case Move::Right:
          b.constant(R::temp, 2);
          b.op(Op::Sub, {R::temp, R::temp, R::head_frac});
          b.op(Op::Div, {R::head_frac, R::one, R::temp}, base + "_inv");
          break;
        case Move::Left:
          b.branch(R::head_frac, R::zero, end, ChartBuilder::kNext);
          b.op(Op::Add, {R::temp, R::head_frac, R::head_frac});
          b.op(Op::Sub, {R::temp, R::temp, R::one});
          b.op(Op::Div, {R::head_frac, R::temp, R::head_frac}, base + "_inv");
          break;
      }
      if (rule->move[0] != Move::Stay) {
        b.label(base + "_inv");
        b.branch(R::head_frac, R::zero, base + "_inv0", base + "_invk");
        b.label(base + "_inv0");
        b.constant(R::head_inv, 0, end);
        b.label(base + "_invk");
        b.op(Op::Sub, {R::temp, R::one, R::head_frac});
        b.op(Op::Div, {R::head_inv, R::temp, R::head_frac}, end);
      }
      b.label(end);
      b.constant(R::temp, 0);
      if (rule->next == kHalt) {
        b.constant(R::stepped, 1, ChartBuilder::kHaltLabel);
      } else {
        b.constant(R::state, static_cast<long>(rule->next));
        b.constant(R::stepped, 1, "D");
      }
    }
  }
  b.label("IMPLICIT_HALT");
  b.node(BssNode{});

  Program out;
  out.family = Family::IBSSM;
  out.name = (p.name.empty() ? std::string("program") : p.name) + "_ibssm";
  out.input_arity = 1;
  out.register_count = R::count;
  out.nodes = b.finish();
  out.set_meta("dispatch", std::to_string(b.at("DISPATCH")));
  out.set_meta("implicit_halt", std::to_string(b.at("IMPLICIT_HALT")));
  out.set_meta("step_bound", std::to_string(longest_step(out.nodes)));
  out.set_meta("tapes", std::to_string(p.tape_count));
  auto problems = validate_program(out);
  if (!problems.empty()) throw Error("compiler produced an invalid program: " + problems.front().message);
  return out;
}

Snapshot decode_compiled(const Snapshot& s, std::size_t tape_count) {
  namespace R = reg;
  if (s.registers.size() < R::count) throw PreconditionError("not a compiled machine's registers");
  Snapshot out;
  out.time = s.time;
  const auto& st = s.registers[R::state];
  if (!st.is_rational() || denominator(st.rational()) != 1 || st.rational() < 0)
    throw PreconditionError("state register does not hold a state index");
  out.state = static_cast<std::size_t>(numerator(st.rational()));
  const auto& hf = s.registers[R::head_frac];
  if (!hf.is_rational()) throw PreconditionError("head register holds a code");
  Rational f = hf.rational();
  std::uint64_t k = 0;
  if (f < 1) {
    Rational kk = f / (1 - f);
    if (kk < 0 || denominator(kk) != 1) throw PreconditionError("head register is not k/(k+1)");
    k = static_cast<std::uint64_t>(numerator(kk));
  }
  out.heads = {CellAddr(Ordinal(), k)};
  const auto& code = s.registers[R::code];
  out.tapes = code.is_code() ? tapes_of(decode_register(code), tape_count) : std::vector<Tape>(tape_count);
  return out;
}

Snapshot compiled_initial(const Program& compiled, std::string_view bits) {
  if (compiled.family != Family::IBSSM || compiled.register_count < reg::count)
    throw PreconditionError("not a compiled program");
  Snapshot s = ibssm_initial(compiled, {});
  CellBits cells;
  for (const auto& a : parse_bit_input(bits)) cells[cell_index(0, a.offset)] = 1;
  if (!cells.empty()) s.registers[reg::code] = encode_tape(cells);
  return s;
}

std::string BisimReport::str() const {
  std::string out = inconclusive ? "inconclusive" : agree ? "agree" : "diverge";
  out += ": " + std::to_string(checkpoints) + " checkpoints, " + std::to_string(limit_checkpoints) +
         " limits, up to level " + std::to_string(max_limit_level);
  out += "; ittm " + ittm.str() + "; ibssm " + ibssm.str();
  if (!divergence.empty()) out += "; " + divergence;
  return out;
}

namespace {

unsigned limit_level(const Ordinal& t) {
  // exponent of the last CNF term: the level of the limit t closes
  if (t.terms().empty()) return 0;
  auto e = t.terms().back().exponent.to_u64();
  return e ? static_cast<unsigned>(*e) : 64;
}

bool same_machine(const Snapshot& a, const Snapshot& b) {
  return a.state == b.state && a.heads == b.heads && a.tapes == b.tapes;
}

}  // namespace

BisimReport bisimulate(const Program& p, std::string_view bits, const Budget& budget) {
  budget.validate();
  Program c = compile_ittm_to_ibssm(p);
  const std::size_t dispatch = std::stoul(*c.meta_value("dispatch"));
  const std::size_t implicit_halt = std::stoul(*c.meta_value("implicit_halt"));
  const std::size_t tapes = p.tape_count;
  BisimReport rep;

  // ITTM stages by time, as far as the ITTM side simulated them.
  std::map<Ordinal, Snapshot> ittm_at;
  SnapshotObserver keep = [&](const Snapshot& s, SnapshotRole, const CycleEvidence*) { ittm_at.emplace(s.time, s); };
  TmModel tm(p, ittm_initial(p, bits));
  RegisterModel rm(c, compiled_initial(c, bits), IbssmConfig{LimitRule::Liminf});
  Ordinal target = omega_pow(Ordinal(budget.level));
  UntilResult iu = run_until(tm, target, budget, keep);

  // IBSSM side: the j-th pass through DISPATCH after limit lambda is stage lambda + j.
  Ordinal lambda;
  std::uint64_t arrivals = 0;
  auto compare = [&](const Snapshot& s, const Ordinal& t, bool limit) {
    if (!rep.divergence.empty()) return;
    auto it = ittm_at.find(t);
    if (it == ittm_at.end()) return;
    Snapshot d;
    try {
      d = decode_compiled(s, tapes);
    } catch (const Error& e) {
      rep.divergence = "at " + t.str() + ": " + e.what();
      return;
    }
    ++rep.checkpoints;
    if (limit) {
      ++rep.limit_checkpoints;
      rep.max_limit_level = std::max(rep.max_limit_level, limit_level(t));
    }
    if (!same_machine(d, it->second))
      rep.divergence = "at " + t.str() + ": ittm " + it->second.str() + " vs ibssm " + d.str();
  };
  SnapshotObserver watch = [&](const Snapshot& s, SnapshotRole role, const CycleEvidence*) {
    if (role == SnapshotRole::Limit) {
      lambda = s.time;
      arrivals = 0;
      compare(s, lambda, true);
      return;
    }
    if (role == SnapshotRole::Successor && s.state == dispatch) {
      ++arrivals;
      compare(s, add(lambda, Ordinal(arrivals - 1)), false);
    }
  };
  UntilResult bu = run_until(rm, target, budget, watch);

  // halting stage the IBSSM side stands for
  auto ittm_halt_time = [&](const RunResult& r) {
    bool implicit = r.final.state == implicit_halt;
    std::uint64_t steps = arrivals == 0 ? 0 : arrivals - 1;
    return add(lambda, Ordinal(steps + (implicit ? 0 : 1)));
  };

  if (!rep.divergence.empty()) {
    rep.ittm = iu.reached ? RunResult{} : iu.stop;
    rep.ibssm = bu.reached ? RunResult{} : bu.stop;
    return rep;
  }
  if (!iu.reached || !bu.reached) {
    // one side stopped short of the target: it must be a matching halt
    auto side_outcome = [](const UntilResult& u) { return u.reached ? Outcome::Unresolved : u.stop.outcome; };
    Outcome oi = side_outcome(iu), ob = side_outcome(bu);
    rep.ittm = iu.stop;
    rep.ibssm = bu.stop;
    if ((!iu.reached && oi == Outcome::Unresolved) || (!bu.reached && ob == Outcome::Unresolved)) {
      rep.inconclusive = true;
      rep.divergence = std::string(!iu.reached && oi == Outcome::Unresolved ? "ittm" : "ibssm") +
                       " side unresolved before " + target.str();
      return rep;
    }
    if (iu.reached != bu.reached || oi != ob) {
      rep.divergence = "runs stop differently: ittm " + (iu.reached ? std::string("reached ") + target.str() : iu.stop.str()) +
                       ", ibssm " + (bu.reached ? std::string("reached ") + target.str() : bu.stop.str());
      return rep;
    }
    if (oi == Outcome::Halted && !(ittm_halt_time(bu.stop) == iu.stop.time)) {
      rep.divergence = "ittm halts at " + iu.stop.time.str() + ", ibssm stands for " + ittm_halt_time(bu.stop).str();
      return rep;
    }
    Snapshot d = decode_compiled(bu.stop.final, tapes);
    if (oi == Outcome::Halted && !same_machine(d, iu.stop.final)) {
      rep.divergence = "halting configurations differ: ittm " + iu.stop.final.str() + " vs ibssm " + d.str();
      return rep;
    }
    rep.agree = true;
    return rep;
  }

  // both reached the target: compare the runs' verdicts
  rep.ittm = run_machine(tm, budget);
  rep.ibssm = run_machine(rm, budget);
  Outcome oi = rep.ittm.outcome, ob = rep.ibssm.outcome;
  if (oi == Outcome::Unresolved || ob == Outcome::Unresolved) {
    rep.inconclusive = true;
    rep.divergence = "unresolved outcome";
    return rep;
  }
  if (oi != ob) {
    rep.divergence = "outcomes differ: ittm " + rep.ittm.str() + ", ibssm " + rep.ibssm.str();
    return rep;
  }
  rep.agree = true;
  return rep;
}

}  // namespace transfinite
