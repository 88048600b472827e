// One line per criterion: PASS or FAIL, elapsed time, and a short note.
// Exit status is the number of failures.

#include "testkit.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

using namespace transfinite;

namespace {

struct Verdict {
  bool pass = false;
  std::string note;
};

Verdict fail(std::string why) { return {false, std::move(why)}; }

// criterion 1 -------------------------------------------------------------

Ordinal random_below_ww(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nterms(0, 4), expo(0, 6), coef(1, 6);
  Ordinal out;
  for (int i = nterms(rng); i > 0; --i) out = add(out, mul(omega_pow(Ordinal(expo(rng))), Ordinal(coef(rng))));
  return out;
}

// w^2*a + w*b + c as the concatenation of a copies of w^2, b of w, c of 1;
// two such words compare by the first block that differs in length.
int concat_compare(const std::array<int, 3>& x, const std::array<int, 3>& y) {
  for (int i = 0; i < 3; ++i)
    if (x[i] != y[i]) return x[i] < y[i] ? -1 : 1;
  return 0;
}

Verdict ordinal_laws() {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = random_below_ww(rng), b = random_below_ww(rng), c = random_below_ww(rng);
    if (add(add(a, b), c) != add(a, add(b, c))) return fail("associativity: " + a.str() + ", " + b.str() + ", " + c.str());
    if (mul(a, add(b, c)) != add(mul(a, b), mul(a, c)))
      return fail("distributivity: " + a.str() + ", " + b.str() + ", " + c.str());
  }
  std::vector<std::array<int, 3>> all;
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b)
      for (int c = 0; c <= 5; ++c) all.push_back({a, b, c});
  auto ord = [](const std::array<int, 3>& x) {
    return add(add(mul(omega_pow(2), Ordinal(x[0])), mul(Ordinal::omega(), Ordinal(x[1]))), Ordinal(x[2]));
  };
  for (const auto& x : all)
    for (const auto& y : all) {
      int want = concat_compare(x, y);
      Cmp got = compare(ord(x), ord(y));
      if (got != (want < 0 ? Cmp::LT : want > 0 ? Cmp::GT : Cmp::EQ)) return fail("compare " + ord(x).str() + " vs " + ord(y).str());
    }
  return {true, "10000 triples, " + std::to_string(all.size() * all.size()) + " comparisons"};
}

// criterion 2 -------------------------------------------------------------

Verdict engine_oracle() {
  int compared = 0;
  auto check = [&](const Program& p, std::size_t n) -> std::string {
    auto h = testkit::successor_history(p, tm_initial(p, {}), n);
    if (h.size() < n + 1) return "";
    auto ev = detect_cycle(h, h.size(), p.heads);
    if (!ev || ev->start_index + 2 * ev->period + 2 > h.size()) return "";
    auto rules = LimitRuleSet::of(p, Ordinal::omega());
    Snapshot lim = resolve_limit(h, *ev, p.heads, rules);
    ++compared;
    auto m = testkit::limit_mismatch(lim, brute_liminf_oracle(h, ev->period, p.heads, rules));
    return m.empty() ? "" : p.name + ": " + m;
  };
  for (const char* f : {"flipper.prog", "flipper_then_halt.prog", "two_phase.prog", "bounded_marcher.prog",
                        "marcher.prog", "marcher3.prog", "toggle_pair.prog", "two_cell_flipper.prog"}) {
    Program p = testkit::load(f);
    if (p.family != Family::ITTM) continue;
    if (auto m = check(p, 400); !m.empty()) return fail(m);
    Program o = p;
    o.family = Family::OTM;
    if (auto m = check(o, 400); !m.empty()) return fail("otm " + m);
  }
  Schema s{Family::ITTM, 2, 1};
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::uint64_t> pick(0, schema_size(s) - 1);
  for (int i = 0; i < 5000 && compared < 150; ++i) {
    auto p = program_at(s, pick(rng));
    if (!p) continue;
    if (auto m = check(*p, 120); !m.empty()) return fail(m);
  }
  if (compared < 50) return fail("only " + std::to_string(compared) + " histories");
  return {true, std::to_string(compared) + " histories"};
}

// criterion 3 -------------------------------------------------------------

Verdict exact_clocking() {
  struct Case {
    const char* file;
    const char* time;
  };
  for (const Case& c : {Case{"flipper_then_halt.prog", "w + 1"}, Case{"two_phase.prog", "w*2"}}) {
    Program p = testkit::load(c.file);
    Budget b = testkit::budget(20000, 2, 500);
    std::ostringstream trace;
    TraceWriter w(trace, p, b);
    std::vector<Snapshot> starts{tm_initial(p, {})};
    std::vector<Snapshot> limits;
    auto obs = w.observer();
    auto r = ittm_run(p, "", b, [&](const Snapshot& s, SnapshotRole role, const CycleEvidence* ev) {
      obs(s, role, ev);
      if (role == SnapshotRole::Limit) {
        limits.push_back(s);
        starts.push_back(s);
      }
    });
    w.finish(r);
    if (r.outcome != Outcome::Halted || r.time.str() != c.time)
      return fail(std::string(c.file) + ": " + r.str());
    // each w-approach against 10^4 plain steps
    for (std::size_t k = 0; k < limits.size(); ++k) {
      auto h = testkit::successor_history(p, starts[k], 10000);
      if (h.size() != 10001) return fail(std::string(c.file) + ": approach halted early");
      auto ev = detect_cycle(h, h.size(), p.heads);
      if (!ev) return fail(std::string(c.file) + ": no cycle in 10^4 steps");
      auto m = testkit::limit_mismatch(limits[k],
                                       brute_liminf_oracle(h, ev->period, p.heads, LimitRuleSet::of(p, limits[k].time)));
      if (!m.empty()) return fail(std::string(c.file) + " at " + limits[k].time.str() + ": " + m);
    }
    std::istringstream in(trace.str());
    auto rep = replay_trace(in);
    if (!rep.ok) return fail(std::string(c.file) + " replay: " + rep.failure);
  }
  return {true, "w + 1 and w*2, traces replay"};
}

// criterion 4 -------------------------------------------------------------

Verdict liminf_star() {
  Program p = testkit::load("marcher.prog");
  auto first_limit = [](const Program& q) {
    std::optional<Snapshot> lim;
    SnapshotObserver obs = [&](const Snapshot& s, SnapshotRole role, const CycleEvidence*) {
      if (role == SnapshotRole::Limit && !lim) lim = s;
    };
    if (q.family == Family::OTM) otm_run(q, {}, testkit::budget(), obs);
    else ittm_run(q, "", testkit::budget(), obs);
    return lim;
  };
  auto a = first_limit(p);
  Program o = p;
  o.family = Family::OTM;
  auto b = first_limit(o);
  if (!a || !b) return fail("no limit reached");
  if (a->time != Ordinal::omega() || b->time != Ordinal::omega()) return fail("first limit not at w");
  if (a->heads[0] != CellAddr{}) return fail("ittm head at " + a->heads[0].str());
  if (b->heads[0] != CellAddr(Ordinal::omega(), 0)) return fail("otm head at " + b->heads[0].str());
  return {true, "ittm head 0, otm head w"};
}

// criterion 5 -------------------------------------------------------------

Verdict bisimulation() {
  const char* corpus[] = {"halt.prog",          "flipper.prog",       "flipper_then_halt.prog", "two_phase.prog",
                          "omega2_halter.prog", "bounded_marcher.prog", "write_c5.prog",        "copy_input.prog",
                          "walker3.prog",       "toggle_pair.prog",   "two_cell_flipper.prog"};
  unsigned top = 0;
  std::uint64_t checkpoints = 0;
  for (const char* f : corpus) {
    Program p = testkit::load(f);
    std::string input = p.input_arity ? "1" : "";
    auto r = bisimulate(p, input, testkit::budget(100000, 2, 1000));
    if (!r.agree) return fail(std::string(f) + ": " + r.str());
    top = std::max(top, r.max_limit_level);
    checkpoints += r.checkpoints;
  }
  if (top < 2) return fail("no run reached a level-2 limit");
  return {true, std::to_string(std::size(corpus)) + " programs, " + std::to_string(checkpoints) + " checkpoints"};
}

// criterion 6 -------------------------------------------------------------

Verdict naive_encoding() {
  Program p = testkit::load("two_cell_flipper.prog");
  // finite stages as cells C0 = tape 0 cell 0, C1 = tape 1 cell 0
  auto h = testkit::successor_history(p, tm_initial(p, {}), 40);
  std::vector<BssValue> naive;
  for (const auto& s : h) naive.emplace_back(naive_encode(cells_of(s.tapes)));
  BssValue nl = register_liminf({naive.end() - 2, naive.end()});
  if (!(nl == BssValue(parse_rational("1/100")))) return fail("naive liminf " + nl.str());

  std::optional<Snapshot> ittm_lim;
  ittm_run(p, "", testkit::budget(), [&](const Snapshot& s, SnapshotRole role, const CycleEvidence*) {
    if (role == SnapshotRole::Limit && !ittm_lim) ittm_lim = s;
  });
  if (!ittm_lim || !cells_of(ittm_lim->tapes).empty()) return fail("ittm limit tape is not (0,0)");

  Program c = compile_ittm_to_ibssm(p);
  std::optional<Snapshot> reg_lim;
  auto r = run_liminf(c, {}, testkit::budget(), [&](const Snapshot& s, SnapshotRole role, const CycleEvidence*) {
    if (role == SnapshotRole::Limit && !reg_lim) reg_lim = s;
  });
  if (!reg_lim && r.time == Ordinal::omega()) reg_lim = r.final;
  if (!reg_lim) return fail("compiled run reached no limit: " + r.str());
  auto bits = decode_register(reg_lim->registers[reg::code]);
  if (bits.count(cell_index(0, 0)) || bits.count(cell_index(1, 0))) return fail("structured code decodes nonzero");
  return {true, "naive 1/100, structured (0,0)"};
}

// criteria 7 and 8 ----------------------------------------------------------

struct BoundRun {
  std::uint64_t programs = 0, runs = 0, halted = 0, accepted = 0;
  std::vector<std::string> violations, mismatches;
};

const BoundRun& bound_corpus() {
  static const BoundRun out = [] {
    BoundRun b;
    Schema s{Family::IBSSM, 2, 1};
    Budget budget = testkit::budget(2000, 3, 50);
    const std::vector<std::vector<Rational>> inputs{{0, 0}, {parse_rational("1/2"), parse_rational("1/3")}};
    for (const auto& p : enumerate_programs(s, schema_size(s))) {
      ++b.programs;
      for (const auto& in : inputs) {
        ++b.runs;
        auto c = run_continuity(p, in, budget);
        if (c.halted()) {
          ++b.halted;
          if (!check_halting_bound(p, c)) b.violations.push_back(p.name + ": " + c.str());
        }
        if (c.outcome == Outcome::ContinuityViolation || c.outcome == Outcome::Unresolved) continue;
        ++b.accepted;
        auto l = run_liminf(p, in, budget);
        if (!(l == c)) b.mismatches.push_back(p.name + ": " + c.str() + " vs " + l.str());
      }
    }
    return b;
  }();
  return out;
}

Verdict halting_bound() {
  const BoundRun& b = bound_corpus();
  if (!b.violations.empty()) return fail(std::to_string(b.violations.size()) + " violations, first " + b.violations[0]);
  return {true, std::to_string(b.programs) + " programs, " + std::to_string(b.halted) + " of " +
                    std::to_string(b.runs) + " runs halt within bound"};
}

Verdict continuity_in_liminf() {
  const BoundRun& b = bound_corpus();
  if (!b.mismatches.empty()) return fail(std::to_string(b.mismatches.size()) + " mismatches, first " + b.mismatches[0]);
  return {true, std::to_string(b.accepted) + " accepted runs identical"};
}

// criterion 9 -------------------------------------------------------------

Program walker(std::uint64_t n) {
  std::ostringstream out;
  out << "family delta\nname walk" << n << "\ntapes 1\nhead 0 : 0\ndelta w^w\nstates";
  for (std::uint64_t i = 0; i <= n; ++i) out << " s" << i;
  out << "\nstart s0\n";
  for (std::uint64_t i = 0; i < n; ++i) out << "rule s" << i << " * -> _ R s" << i + 1 << "\n";
  out << "rule s" << n << " * -> _ S halt\n";
  return parse_program(out.str());
}

Verdict delta_lab() {
  Ordinal ww = Ordinal::parse("w^w");
  DeltaMachine m(ww);
  Program sr = s_routine_program(ww, 21);
  if (!check_no_left_on_limit(sr)) return fail("S-routine moves left on a limit cell");
  auto r = m.run(sr, {}, testkit::budget(5000, 1, 50));
  if (r.outcome != Outcome::Halted) return fail("S-routine: " + r.str());
  auto sc = slice_contents(r.final.tapes[0]);
  for (std::uint64_t beta = 0; beta <= 20; ++beta) {
    std::set<std::uint64_t> want;
    for (std::uint64_t g = 0; g < beta; ++g) want.insert(g);
    auto it = sc.find(beta);
    const std::set<std::uint64_t> got = it == sc.end() ? std::set<std::uint64_t>{} : it->second;
    if (got != want) return fail("slice " + std::to_string(beta) + " holds " + std::to_string(got.size()) + " ones");
  }
  if (!slices_hold_strings(r.final.tapes[0], 21)) return fail("stray ones outside slices 0..20");

  std::vector<Program> seeds{marcher_halt_at_limit(ww)};
  for (std::uint64_t n : {2u, 3u, 5u, 8u, 13u}) seeds.push_back(walker(n));
  auto rep = reachability_survey(ww, 2000, testkit::budget(500, 1, 20), seeds);
  for (const auto& [cell, idx] : rep.reached)
    if (!replay_entry(rep, cell)) return fail("entry for " + cell.str() + " does not replay");
  auto e = build_wellorder_E(rep);
  if (!is_strict_total_order(e)) return fail("E is not a strict total order");
  // a finite set of cells has the order type of its size
  if (e.order_type != Ordinal(rep.reached.size())) return fail("order type " + e.order_type.str());
  return {true, "slices 0..20, " + std::to_string(rep.reached.size()) + " cells replay, E type " + e.order_type.str()};
}

// criterion 10 ------------------------------------------------------------

TorusPoint min_over(const std::vector<TorusPoint>& xs) {
  TorusPoint m = xs.front();
  for (const auto& x : xs)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], x[i]);
  return m;
}

// Orbit of y under f until it repeats; returns the cycle.
std::vector<TorusPoint> orbit_cycle(const TorusMap& f, TorusPoint y) {
  std::vector<TorusPoint> seen{y};
  for (;;) {
    y = f(y);
    auto it = std::find(seen.begin(), seen.end(), y);
    if (it != seen.end()) return {it, seen.end()};
    seen.push_back(y);
  }
}

// Points at w*k for k = 0, 1, 2, ... until they repeat, with every point
// seen on the way.
std::optional<TorusPoint> torus_oracle(const TorusMap& f, const TorusPoint& x, const Ordinal& alpha) {
  std::vector<TorusPoint> at{x};
  std::vector<std::vector<TorusPoint>> cycles;
  for (;;) {
    cycles.push_back(orbit_cycle(f, at.back()));
    TorusPoint next = min_over(cycles.back());
    if (alpha == Ordinal::omega()) return next;
    if (alpha == Ordinal::parse("w*2") && at.size() == 1) {
      at.push_back(next);
      continue;
    }
    if (alpha == Ordinal::parse("w*2")) return next;
    auto it = std::find(at.begin(), at.end(), next);
    if (it != at.end()) {
      // stages below w^2 cofinally run through the cycles from *it on
      std::vector<TorusPoint> all;
      for (auto k = static_cast<std::size_t>(it - at.begin()); k < cycles.size(); ++k)
        all.insert(all.end(), cycles[k].begin(), cycles[k].end());
      all.insert(all.end(), at.begin() + (it - at.begin()), at.end());
      return min_over(all);
    }
    at.push_back(next);
  }
}

Verdict torus() {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> den(1, 50), dim(1, 2);
  const Ordinal alphas[] = {Ordinal::omega(), Ordinal::parse("w*2"), Ordinal::parse("w^2")};
  Budget b = testkit::budget(20000, 3, 200);
  int checked = 0;
  for (int inst = 0; inst < 100; ++inst) {
    std::size_t n = static_cast<std::size_t>(dim(rng));
    TorusPoint shift(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
      int q = den(rng);
      shift[i] = Rational(std::uniform_int_distribution<int>(0, q - 1)(rng), q);
      int qx = den(rng);
      x[i] = Rational(std::uniform_int_distribution<int>(0, qx - 1)(rng), qx);
    }
    TorusMap f = TorusMap::rotation(shift);
    for (const Ordinal& alpha : alphas) {
      auto want = torus_oracle(f, x, alpha);
      std::string bad;
      std::optional<Snapshot> prev;
      auto got = iterate_torus(f, x, alpha, b, [&](const Snapshot& s, SnapshotRole, const CycleEvidence*) {
        if (prev && s.time == add(prev->time, 1) && bad.empty()) {
          TorusPoint a, c;
          for (const auto& v : prev->registers) a.push_back(v.rational());
          for (const auto& v : s.registers) c.push_back(v.rational());
          if (f(a) != c) bad = "trace step at " + s.time.str();
        }
        prev = s;
      });
      std::string what = f.str() + " from " + point_str(x) + " at " + alpha.str();
      if (!bad.empty()) return fail(what + ": " + bad);
      if (!got.resolved) return fail(what + ": " + got.stop.str());
      if (got.point != *want) return fail(what + ": " + point_str(got.point) + " vs " + point_str(*want));
      auto next = iterate_torus(f, x, add(alpha, 1), b);
      if (!next.resolved || next.point != f(got.point)) return fail(what + ": successor stage");
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " instance stages"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Verdict()> run;
  };
  const Criterion all[] = {
      {"1 ordinal laws", 10, ordinal_laws},
      {"2 limit engine vs oracle", 10, engine_oracle},
      {"3 exact clocking", 30, exact_clocking},
      {"4 liminf* head rule", 0, liminf_star},
      {"5 bisimulation", 300, bisimulation},
      {"6 naive encoding counterexample", 0, naive_encoding},
      {"7 halting bound, continuity, k <= 2", 600, halting_bound},
      {"8 continuity within liminf", 0, continuity_in_liminf},
      {"9 delta lab", 300, delta_lab},
      {"10 torus", 30, torus},
  };
  int failures = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (v.pass && c.limit_s > 0 && s > c.limit_s) v = fail(v.note + "; over the time limit");
    failures += v.pass ? 0 : 1;
    std::printf("%s  %-38s %8.2fs  %s\n", v.pass ? "PASS" : "FAIL", c.name, s, v.note.c_str());
    std::fflush(stdout);
  }
  return failures;
}
