#include "transfinite/ibssm.hpp"

#include "transfinite/error.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>

namespace transfinite {

std::string_view limit_rule_name(LimitRule r) { return r == LimitRule::Liminf ? "liminf" : "continuity"; }

LimitRule parse_limit_rule(std::string_view s) {
  if (s == "liminf") return LimitRule::Liminf;
  if (s == "continuity") return LimitRule::Continuity;
  throw SyntaxError("unknown limit rule '" + std::string(s) + "' (liminf or continuity)");
}

namespace {

struct Crash {
  std::string why;
};

Rational number(const BssValue& v, Snapshot& s) {
  if (v.is_rational()) return v.rational();
  ++s.code_reads;
  if (!v.code().finite_support() || !v.code().conforming()) throw Crash{"arithmetic on an infinite code"};
  return v.code().to_rational();
}

StructuredCode& code_in(Snapshot& s, std::size_t r, const char* op) {
  if (!s.registers[r].is_code()) throw Crash{std::string(op) + " on non-code register r" + std::to_string(r)};
  auto& c = s.registers[r].code();
  if (!c.conforming()) throw Crash{std::string(op) + " on non-conforming code in r" + std::to_string(r)};
  return c;
}

std::uint64_t head_index(const BssValue& v) {
  if (!v.is_rational()) throw Crash{"head register holds a code"};
  const Rational& q = v.rational();
  if (q == 0) return 0;
  Rational k = 1 / q;
  if (denominator(k) != 1 || k < 1) throw Crash{"head register is not 1/k"};
  auto n = numerator(k);
  if (n > boost::multiprecision::cpp_int(UINT32_MAX)) throw Crash{"head index out of range"};
  return static_cast<std::uint64_t>(n);
}

std::uint64_t target_block(const BssNode& n, const BssValue& head) {
  return n.stride * head_index(head) + n.offset;
}

void exec(Snapshot& s, const BssNode& n) {
  auto& R = s.registers;
  switch (n.op) {
    case Op::Const: R[n.regs[0]] = BssValue(n.constant); break;
    case Op::Copy: R[n.regs[0]] = R[n.regs[1]]; break;
    case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: {
      Rational a = number(R[n.regs[1]], s);
      Rational b = number(R[n.regs[2]], s);
      Rational v;
      if (n.op == Op::Add) v = a + b;
      else if (n.op == Op::Sub) v = a - b;
      else if (n.op == Op::Mul) v = a * b;
      else if (b == 0) throw Crash{"division by zero"};
      else v = a / b;
      R[n.regs[0]] = BssValue(std::move(v));
      break;
    }
    case Op::Branch: break;
    case Op::Halt: break;
    case Op::DInit: {
      auto& v = R[n.regs[0]];
      if (v.is_rational()) {
        if (v.rational() != 0) throw Crash{"dinit on nonzero rational in r" + std::to_string(n.regs[0])};
        v = BssValue(StructuredCode::initial());
      }
      break;
    }
    case Op::DRead: {
      std::uint64_t blk = target_block(n, R[n.regs[2]]);
      auto sh = code_in(s, n.regs[1], "dread").shift(blk);
      R[n.regs[0]] = BssValue(Rational(sh ? static_cast<long>(*sh % 2) : 0L));
      break;
    }
    case Op::DMove: {
      std::uint64_t blk = target_block(n, R[n.regs[1]]);
      auto& c = code_in(s, n.regs[0], "dmove");
      auto sh = c.shift(blk);
      if (!sh) throw Crash{"dmove on empty block " + std::to_string(blk)};
      c.set_shift(blk, *sh + 1);
      break;
    }
    case Op::DReset: {
      auto& c = code_in(s, n.regs[0], "dreset");
      std::vector<std::uint64_t> empty;
      for (const auto& [b, sh] : c.blocks)
        if (!sh && n.stride <= 64 && ((n.offset >> (b % n.stride)) & 1U)) empty.push_back(b);
      for (auto b : empty) c.set_shift(b, 0);
      break;
    }
  }
}

}  // namespace

StepStatus bss_step(Snapshot& s, const Program& p, std::string* why) {
  if (s.state == kHalt || s.state >= p.nodes.size()) return StepStatus::HaltImplicit;
  const BssNode& n = p.nodes[s.state];
  std::size_t next = n.next;
  try {
    if (n.op == Op::Branch) {
      const auto& a = s.registers[n.regs[0]];
      const auto& b = s.registers[n.regs[1]];
      if (a.is_code() || b.is_code()) ++s.code_reads;
      if (compare_values(a, b) > 0) next = n.alt;
    } else {
      exec(s, n);
    }
  } catch (const Crash& c) {
    if (why) *why = c.why;
    return StepStatus::Crash;
  }
  s.time = add(s.time, Ordinal(1));
  if (n.op == Op::Halt || next == kHalt) return StepStatus::HaltExplicit;
  s.state = next;
  return StepStatus::Continue;
}

Snapshot ibssm_initial(const Program& p, const std::vector<Rational>& inputs) {
  if (p.family != Family::IBSSM) throw PreconditionError("expected an ibssm program");
  if (inputs.size() > p.register_count)
    throw PreconditionError("program has " + std::to_string(p.register_count) + " registers, got " +
                            std::to_string(inputs.size()) + " inputs");
  Snapshot s;
  s.state = 0;
  s.registers.assign(p.register_count, BssValue(Rational(0)));
  for (std::size_t i = 0; i < inputs.size(); ++i) s.registers[i] = BssValue(inputs[i]);
  return s;
}

BssValue register_liminf(const std::vector<BssValue>& cycle, const std::set<std::uint64_t>& drifting) {
  if (cycle.empty()) throw PreconditionError("register_liminf: empty cycle");
  ValueSummary vs;
  for (const auto& v : cycle) vs.add(v);
  return vs.min_under(drifting);
}

namespace {

Rational pow10(unsigned n) {
  Rational r(1);
  for (unsigned i = 0; i < n; ++i) r *= 10;
  return r;
}

Rational floor_digits(const BssValue& v, unsigned n) {
  if (v.is_code()) return truncate_digits(v, n);
  Rational scale = pow10(n);
  Rational x = v.rational() * scale;
  boost::multiprecision::cpp_int q = numerator(x) / denominator(x);
  if (x < 0 && Rational(q) != x) q -= 1;
  return Rational(q) / scale;
}

}  // namespace

RegisterLiminfWitness s_plus_witness(const std::vector<BssValue>& cycle, unsigned n) {
  if (cycle.empty()) throw PreconditionError("s_plus_witness: empty cycle");
  Rational step = 1 / pow10(n);
  RegisterLiminfWitness w;
  w.n = n;
  bool first = true;
  for (const auto& v : cycle) {
    Rational t = floor_digits(v, n) + step;
    if (first || t < w.t) w.t = t;
    first = false;
  }
  BssValue lim = register_liminf(cycle);
  w.holds = compare_values(lim, BssValue(w.t)) < 0 && w.t - step <= floor_digits(lim, n);
  return w;
}

namespace {

bool affine_op(Op op) {
  return op == Op::Const || op == Op::Copy || op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div;
}

// Register contents as affine forms in the registers at the rotation start.
struct Form {
  std::vector<Rational> coef;
  Rational c;
};

struct Divergence {
  std::size_t reg = 0;
  int sign = 0;
};

// The branch-free cycle through `start` maps the registers affinely, and at
// `now` (one rotation after `before`) every step of that map pushes some
// register monotonically to infinity.  Returns that register.
std::optional<Divergence> affine_divergence(const Program& p, std::size_t start, const Snapshot& before,
                                            const Snapshot& now) {
  std::size_t nr = p.register_count;
  for (std::size_t r = 0; r < nr; ++r)
    if (!now.registers[r].is_rational() || !before.registers[r].is_rational()) return std::nullopt;
  std::vector<std::size_t> path;
  std::vector<bool> written(nr, false);
  std::size_t node = start;
  do {
    if (node == kHalt || node >= p.nodes.size() || path.size() > p.nodes.size()) return std::nullopt;
    const BssNode& n = p.nodes[node];
    if (!affine_op(n.op)) return std::nullopt;
    path.push_back(node);
    written[n.regs[0]] = true;
    node = n.next;
  } while (node != start);

  std::vector<Form> f(nr);
  for (std::size_t r = 0; r < nr; ++r) {
    f[r].coef.assign(nr, Rational(0));
    f[r].coef[r] = 1;
  }
  auto scaled = [](Form x, const Rational& k) {
    for (auto& a : x.coef) a *= k;
    x.c *= k;
    return x;
  };
  std::vector<std::vector<Form>> seen(nr);  // every form each register takes
  for (std::size_t r = 0; r < nr; ++r) seen[r].push_back(f[r]);
  for (std::size_t id : path) {
    const BssNode& n = p.nodes[id];
    Form out;
    out.coef.assign(nr, Rational(0));
    switch (n.op) {
      case Op::Const: out.c = n.constant; break;
      case Op::Copy: out = f[n.regs[1]]; break;
      case Op::Add: case Op::Sub: {
        const Form& a = f[n.regs[1]];
        const Form& b = f[n.regs[2]];
        int sg = n.op == Op::Add ? 1 : -1;
        for (std::size_t k = 0; k < nr; ++k) out.coef[k] = a.coef[k] + sg * b.coef[k];
        out.c = a.c + sg * b.c;
        break;
      }
      case Op::Mul: case Op::Div: {
        std::size_t ra = n.regs[1], rb = n.regs[2];
        if (!written[rb]) {
          const Rational& k = now.registers[rb].rational();
          if (n.op == Op::Div && k == 0) return std::nullopt;
          out = scaled(f[ra], n.op == Op::Mul ? k : 1 / k);
        } else if (n.op == Op::Mul && !written[ra]) {
          out = scaled(f[rb], now.registers[ra].rational());
        } else {
          return std::nullopt;
        }
        break;
      }
      default: return std::nullopt;
    }
    f[n.regs[0]] = out;
    seen[n.regs[0]].push_back(f[n.regs[0]]);
  }

  std::vector<Rational> delta(nr);
  for (std::size_t r = 0; r < nr; ++r) delta[r] = now.registers[r].rational() - before.registers[r].rational();
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t k = 0; k < nr; ++k)
      if (f[r].coef[k] < 0) return std::nullopt;
  for (int sign : {1, -1}) {
    bool mono = true;
    for (const auto& d : delta) mono = mono && (sign > 0 ? d >= 0 : d <= 0);
    if (!mono) continue;
    // registers that move by at least their current step every rotation
    std::vector<bool> grows(nr, false);
    bool any = false;
    for (std::size_t r = 0; r < nr; ++r) {
      grows[r] = delta[r] != 0 && f[r].coef[r] >= 1;
      any = any || grows[r];
    }
    if (!any) continue;
    // a register all of whose intermediate forms lean on a growing one
    for (std::size_t r = 0; r < nr; ++r) {
      bool ok = true;
      for (const auto& form : seen[r]) {
        bool leans = false;
        for (std::size_t k = 0; k < nr && !leans; ++k) leans = grows[k] && form.coef[k] > 0;
        bool nonneg = std::all_of(form.coef.begin(), form.coef.end(), [](const Rational& a) { return a >= 0; });
        ok = ok && leans && nonneg;
      }
      if (ok) return Divergence{r, sign};
    }
  }
  return std::nullopt;
}

}  // namespace

RegisterModel::RegisterModel(Program p, Snapshot init, IbssmConfig cfg)
    : p_(std::move(p)), init_(std::move(init)), cfg_(cfg) {
  if (p_.family != Family::IBSSM) throw PreconditionError("RegisterModel: not an ibssm program");
}

namespace {

using DriftSets = std::map<std::size_t, std::set<std::uint64_t>>;

std::uint64_t register_key(const Snapshot& s) {
  std::uint64_t h = mix64(s.state + 0x9e37);
  for (std::size_t r = 0; r < s.registers.size(); ++r) h = mix64(h + s.registers[r].abstract_hash() * (2 * r + 1));
  return h;
}

// b repeats a, or differs only by code blocks that moved right, with no
// code magnitude consulted in between.
std::optional<DriftSets> register_match(const Snapshot& a, const Snapshot& b) {
  if (a.state != b.state || a.code_reads != b.code_reads) return std::nullopt;
  DriftSets d;
  for (std::size_t r = 0; r < a.registers.size(); ++r) {
    const auto& x = a.registers[r];
    const auto& y = b.registers[r];
    if (x == y) continue;
    if (x.is_rational() || y.is_rational() || !x.abstract_equal(y)) return std::nullopt;
    std::set<std::uint64_t> keys;
    for (const auto& kv : x.code().blocks) keys.insert(kv.first);
    for (const auto& kv : y.code().blocks) keys.insert(kv.first);
    for (auto blk : keys) {
      auto sa = x.code().shift(blk), sb = y.code().shift(blk);
      if (!sa || !sb || *sa == *sb) continue;
      if (*sb < *sa) return std::nullopt;
      d[r].insert(blk);
    }
  }
  return d;
}

BssValue project(const BssValue& v, const std::set<std::uint64_t>& blocks) {
  if (blocks.empty() || v.is_rational()) return v;
  return BssValue(v.code().emptied(blocks));
}

std::size_t footprint(const Snapshot& s) {
  std::size_t n = 1;
  for (const auto& v : s.registers) n += v.is_code() ? 1 + v.code().blocks.size() : 1;
  return n;
}

bool too_big(const Snapshot& s, std::size_t cap) {
  for (const auto& v : s.registers)
    if (v.is_rational() && rational_bits(v.rational()) > cap) return true;
  return false;
}

}  // namespace

ApproachResult RegisterModel::approach(const Snapshot& y, const Ordinal& limit_time, std::uint64_t steps,
                                       const SnapshotObserver* obs) const {
  using K = ApproachResult::Kind;
  const Program& p = p_;
  const std::size_t nr = p.register_count;
  static const std::set<std::uint64_t> kNone;

  auto stop = [&](K kind, Snapshot at, std::string detail) {
    ApproachResult r;
    r.kind = kind;
    r.snapshot = std::move(at);
    r.detail = std::move(detail);
    return r;
  };

  std::vector<Snapshot> hist{y};

  auto resolve = [&](std::size_t i, std::size_t j, const DriftSets& drift) {
    auto blocks_of = [&](std::size_t r) -> const std::set<std::uint64_t>& {
      auto it = drift.find(r);
      return it == drift.end() ? kNone : it->second;
    };
    ApproachResult res;
    res.kind = K::Limit;
    Snapshot& lim = res.snapshot;
    lim.time = limit_time;
    lim.code_reads = hist[j].code_reads;
    lim.state = hist[i].state;
    for (std::size_t k = i; k < j; ++k) lim.state = std::min(lim.state, hist[k].state);

    Summary& sum = res.summary;
    sum.state = y.state;
    for (std::size_t k = 0; k <= j; ++k) sum.state = std::min(sum.state, hist[k].state);
    sum.registers.resize(nr);
    sum.constant.assign(nr, true);
    sum.first = y.registers;

    bool r0_settled = false;
    for (std::size_t r = 0; r < nr; ++r) {
      const auto& blocks = blocks_of(r);
      std::vector<BssValue> period;
      for (std::size_t k = i; k < j; ++k) period.push_back(hist[k].registers[r]);
      bool settled = true;
      BssValue first = project(period.front(), blocks);
      for (const auto& v : period) settled = settled && project(v, blocks) == first;
      if (r == 0) r0_settled = settled;
      if (continuity()) {
        if (!settled) {
          lim.registers = hist[j].registers;
          ApproachResult bad = stop(K::Violation, lim, "register r" + std::to_string(r) + " does not converge");
          bad.r0_settled = r0_settled;
          return bad;
        }
        lim.registers.push_back(first);
      } else {
        lim.registers.push_back(register_liminf(period, blocks));
      }
      for (std::size_t k = 0; k <= j; ++k) {
        sum.registers[r].add(hist[k].registers[r]);
        if (!(hist[k].registers[r] == y.registers[r])) sum.constant[r] = false;
      }
      if (!blocks.empty()) {
        sum.constant[r] = false;
        for (const auto& v : period) sum.registers[r].add(project(v, blocks));
      }
    }
    res.r0_settled = r0_settled;

    CycleEvidence& ev = res.evidence;
    ev.kind = drift.empty() ? CycleKind::ExactRepeat : CycleKind::RightDrift;
    ev.level = 1;
    ev.start_time = hist[i].time;
    ev.start_index = i;
    ev.period = j - i;
    for (const auto& [r, blocks] : drift) ev.drifting_blocks[r] = {blocks.begin(), blocks.end()};
    // equal to any stage on the cycle, the run repeats that cycle for ever
    for (std::size_t k = i; k < j && !res.looping; ++k) res.looping = lim.same_configuration(hist[k]);
    return res;
  };

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> keys;
  std::vector<std::size_t> last_visit(p.nodes.size(), SIZE_MAX);
  std::size_t last_nonaffine = 0;  // index of the latest step through a non-affine node, plus one
  unsigned certificate_tries = 0;
  std::size_t stored = 0;
  try {
    for (std::size_t n = 0;; ++n) {
      Snapshot& cur = hist[n];
      if (n > 0 && obs && *obs) (*obs)(cur, SnapshotRole::Successor, nullptr);
      if (too_big(cur, cfg_.rational_bit_cap)) return stop(K::Unresolved, cur, "rational size cap");
      stored += footprint(cur);
      if (stored > cfg_.history_cap) return stop(K::Unresolved, cur, "history size cap");

      auto& bucket = keys[register_key(cur)];
      std::size_t from = bucket.size() > 32 ? bucket.size() - 32 : 0;
      for (std::size_t b = from; b < bucket.size(); ++b)
        if (auto d = register_match(hist[bucket[b]], cur)) return resolve(bucket[b], n, *d);
      bucket.push_back(n);

      if (cur.state < p.nodes.size()) {
        std::size_t prev = last_visit[cur.state];
        if (prev != SIZE_MAX && prev >= last_nonaffine && certificate_tries < 64) {
          ++certificate_tries;
          if (auto dv = affine_divergence(p, cur.state, hist[prev], cur)) {
            Snapshot at = cur;
            at.time = limit_time;
            std::string what = "register r" + std::to_string(dv->reg) + " diverges to " +
                               (dv->sign > 0 ? "+" : "-") + "infinity";
            return stop(continuity() ? K::Violation : K::Crashed, at, what);
          }
        }
        last_visit[cur.state] = n;
        if (!affine_op(p.nodes[cur.state].op)) last_nonaffine = n + 1;
      }

      if (n >= steps) return stop(K::Unresolved, cur, "step budget exhausted");
      Snapshot next = cur;
      std::string why;
      switch (bss_step(next, p, &why)) {
        case StepStatus::Continue: break;
        case StepStatus::HaltImplicit: return stop(K::Halted, next, "");
        case StepStatus::HaltExplicit:
          if (obs && *obs) (*obs)(next, SnapshotRole::Successor, nullptr);
          return stop(K::Halted, next, "");
        case StepStatus::Crash: return stop(K::Crashed, next, why);
      }
      hist.push_back(std::move(next));
    }
  } catch (const Error& e) {
    return stop(K::Unresolved, hist.back(), e.what());
  }
}

RunResult run_ibssm(const Program& p, const std::vector<Rational>& inputs, const Budget& b, const IbssmConfig& cfg,
                    const SnapshotObserver& obs) {
  RegisterModel m(p, ibssm_initial(p, inputs), cfg);
  return run_machine(m, b, obs);
}

RunResult run_liminf(const Program& p, const std::vector<Rational>& inputs, const Budget& b,
                     const SnapshotObserver& obs) {
  return run_ibssm(p, inputs, b, IbssmConfig{LimitRule::Liminf}, obs);
}

RunResult run_continuity(const Program& p, const std::vector<Rational>& inputs, const Budget& b,
                         const SnapshotObserver& obs) {
  return run_ibssm(p, inputs, b, IbssmConfig{LimitRule::Continuity}, obs);
}

bool check_halting_bound(const Program& p, const RunResult& r) {
  if (!r.halted()) return true;
  auto k = static_cast<std::uint64_t>(p.computation_nodes());
  return r.time < omega_pow(Ordinal(k + 1));
}

}  // namespace transfinite
