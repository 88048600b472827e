#include "transfinite/delta_lab.hpp"

#include "transfinite/error.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

namespace transfinite {

namespace {

constexpr std::size_t kClosureSamples = 64;

void require_closed(const Ordinal& d) {
  if (!d.is_limit()) throw PreconditionError("delta must be a limit ordinal, got " + d.str());
  if (!is_pairing_closed(d, kClosureSamples))
    throw PreconditionError("delta " + d.str() + " is not closed under pairing");
}

std::string bits_of(std::uint32_t obs, std::size_t width) { return observation_text(obs, width); }

// Walks right over cells 0..max(cells), writing 1 on each listed cell of
// the observed tape, then optionally walks back to 0; halts.
Program unrolled_writer(const Ordinal& delta, const std::string& name, std::size_t tapes, std::size_t tape,
                        const std::set<std::uint64_t>& cells, bool return_home) {
  std::ostringstream out;
  out << "family delta\nname " << name << "\ninput 0\ntapes " << tapes << "\nhead 0 : " << tape << "\ndelta "
      << delta.str() << '\n';
  std::uint64_t top = cells.empty() ? 0 : *cells.rbegin();
  std::vector<std::string> states;
  for (std::uint64_t p = 0; p <= top; ++p) states.push_back("c" + std::to_string(p));
  if (return_home)
    for (std::uint64_t p = top; p-- > 0;) states.push_back("r" + std::to_string(p));
  out << "states";
  for (const auto& s : states) out << ' ' << s;
  out << "\nstart c0\n";
  for (std::uint64_t p = 0; p <= top; ++p) {
    const char* w = cells.count(p) ? "1" : "_";
    if (p < top) {
      out << "rule c" << p << " * -> " << w << " R c" << p + 1 << '\n';
    } else if (return_home && top > 0) {
      out << "rule c" << p << " * -> " << w << " L r" << p - 1 << '\n';
    } else {
      out << "rule c" << p << " * -> " << w << " S halt\n";
    }
  }
  if (return_home)
    for (std::uint64_t p = top; p-- > 0;) {
      if (p > 0)
        out << "rule r" << p << " * -> _ L r" << p - 1 << '\n';
      else
        out << "rule r0 * -> _ S halt\n";
    }
  return parse_program(out.str());
}

std::uint64_t finite_cell(const Ordinal& o) {
  auto v = o.to_u64();
  if (!v) throw PreconditionError("cell " + o.str() + " is not finite");
  return *v;
}

// Finite cells holding 1; throws on anything else.
std::vector<std::uint64_t> finite_ones(const Tape& t, const char* what) {
  std::vector<std::uint64_t> out;
  for (const auto& [base, block] : t.blocks()) {
    if (block.is_all_zero()) continue;
    if (!base.is_zero()) throw PreconditionError(std::string(what) + ": 1 at an infinite cell");
    for (auto b : block.tail())
      if (b) throw PreconditionError(std::string(what) + ": infinitely many 1s");
    for (std::uint64_t p = 0; p < block.size(); ++p)
      if (block.get(p)) out.push_back(p);
  }
  return out;
}

}  // namespace

DeltaMachine::DeltaMachine(Ordinal d, bool params) : delta(std::move(d)), parameters_allowed(params) {
  require_closed(delta);
}

RunResult DeltaMachine::run(const Program& p, const std::vector<Ordinal>& marks, const Budget& b,
                            const SnapshotObserver& obs) const {
  if (p.family != Family::Delta)
    throw PreconditionError("expected a delta program, got " + std::string(family_name(p.family)));
  if (!p.delta || *p.delta != delta)
    throw PreconditionError("program is for delta " + (p.delta ? p.delta->str() : std::string("?")) +
                            ", machine has " + delta.str());
  if (!marks.empty() && !parameters_allowed) throw PreconditionError("parameters are not allowed here");
  std::vector<CellAddr> cells;
  for (const auto& m : marks) cells.push_back(CellAddr::from_ordinal(m));
  TmModel m(p, tm_initial(p, cells));
  return run_machine(m, b, obs);
}

Program s_routine_program(const Ordinal& delta, std::size_t slices) {
  require_closed(delta);
  std::set<std::uint64_t> cells;
  for (std::uint64_t b = 0; b < slices; ++b)
    for (std::uint64_t g = 0; g < b; ++g) cells.insert(pair_index(b, g));
  if (delta.is_finite()) throw PreconditionError("delta too short for the slices");
  return unrolled_writer(delta, "s_routine_" + std::to_string(slices), 1, 0, cells, true);
}

std::map<std::uint64_t, std::set<std::uint64_t>> slice_contents(const Tape& t) {
  std::map<std::uint64_t, std::set<std::uint64_t>> out;
  for (auto c : finite_ones(t, "slice decoding")) {
    auto [b, g] = unpair_index(c);
    out[b].insert(g);
  }
  return out;
}

bool slices_hold_strings(const Tape& t, std::size_t slices) {
  auto got = slice_contents(t);
  for (const auto& [b, gs] : got) {
    if (b >= slices || gs.size() != b) return false;
    if (!gs.empty() && *gs.rbegin() != b - 1) return false;
  }
  for (std::uint64_t b = 1; b < slices; ++b)
    if (!got.count(b)) return false;
  return true;
}

std::vector<std::pair<std::size_t, std::uint32_t>> left_on_limit_rules(const Program& p) {
  if (!p.is_tm()) throw PreconditionError("left_on_limit_rules needs a Turing program");
  std::size_t n = p.state_count(), obs_count = std::size_t{1} << p.width();
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::uint32_t o = 0; o < obs_count; ++o)
      if (const auto& r = p.rule(q, o); r && r->next != kHalt) succ[q].push_back(r->next);

  auto reach_from = [&](std::size_t q) {
    std::vector<bool> seen(n);
    std::vector<std::size_t> stack(succ[q].begin(), succ[q].end());
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      if (seen[v]) continue;
      seen[v] = true;
      for (auto w : succ[v]) stack.push_back(w);
    }
    return seen;
  };

  // States reachable from a state on a cycle, that state included.
  std::vector<bool> after_cycle(n);
  for (std::size_t q = 0; q < n; ++q) {
    if (after_cycle[q]) continue;
    auto r = reach_from(q);
    if (!r[q]) continue;
    for (std::size_t v = 0; v < n; ++v)
      if (r[v]) after_cycle[v] = true;
  }

  std::vector<std::pair<std::size_t, std::uint32_t>> out;
  for (std::size_t q = 0; q < n; ++q) {
    if (!after_cycle[q]) continue;
    for (std::uint32_t o = 0; o < obs_count; ++o) {
      const auto& r = p.rule(q, o);
      if (r && std::find(r->move.begin(), r->move.end(), Move::Left) != r->move.end()) out.emplace_back(q, o);
    }
  }
  return out;
}

Program marcher_halt_at_limit(const Ordinal& delta) {
  require_closed(delta);
  std::ostringstream out;
  out << "family delta\nname marcher_halt_at_limit\ninput 0\ntapes 1\nhead 0 : 0\ndelta " << delta.str()
      << "\nstates h m\nstart m\n"
         "rule m 0 -> 1 S h\n"
         "rule h 1 -> _ R m\n"
         "rule h 0 -> _ S halt\n";
  return parse_program(out.str());
}

std::optional<Program> ReachabilityReport::program(std::uint64_t index) const {
  if (index < bound) return program_at(schema, index);
  if (index - bound < seeds.size()) return seeds[index - bound];
  return std::nullopt;
}

ReachabilityReport reachability_survey(const Ordinal& delta, std::uint64_t bound, const Budget& b,
                                       const std::vector<Program>& seeds, std::size_t max_states,
                                       std::size_t threads) {
  DeltaMachine machine(delta);
  b.validate();
  ReachabilityReport rep;
  rep.delta = delta;
  rep.schema = Schema{Family::Delta, max_states, 1, delta};
  rep.bound = std::min(bound, schema_size(rep.schema));
  rep.budget = b;
  rep.seeds = seeds;

  std::uint64_t total = rep.bound + seeds.size();
  std::vector<std::optional<SurveyRecord>> slots(total);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t e; (e = next.fetch_add(1)) < total;) {
      auto p = rep.program(e);
      if (!p) continue;
      SurveyRecord rec;
      rec.index = e;
      try {
        auto r = machine.run(*p, {}, b);
        rec.outcome = r.outcome;
        rec.time = r.time;
        rec.detail = r.detail;
        if (r.halted()) rec.head = r.final.heads.at(0);
      } catch (const Error& err) {
        rec.outcome = Outcome::Unresolved;
        rec.detail = err.what();
      }
      slots[e] = std::move(rec);
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<std::size_t>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(total, 1)));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (auto& s : slots) {
    if (!s) continue;
    if (s->head) rep.reached.emplace(s->head->ordinal(), s->index);
    if (s->outcome == Outcome::Unresolved) rep.unresolved.push_back(s->index);
    rep.records.push_back(std::move(*s));
  }
  return rep;
}

bool replay_entry(const ReachabilityReport& r, const Ordinal& cell) {
  auto it = r.reached.find(cell);
  if (it == r.reached.end()) return false;
  auto rec = std::find_if(r.records.begin(), r.records.end(),
                          [&](const SurveyRecord& x) { return x.index == it->second; });
  auto p = r.program(it->second);
  if (rec == r.records.end() || !p) return false;
  auto res = DeltaMachine(r.delta).run(*p, {}, r.budget);
  return res.halted() && res.time == rec->time && res.final.heads.at(0).ordinal() == cell;
}

Ordinal order_type_of(const std::set<Ordinal>& cells) {
  Ordinal t;
  for (std::size_t i = 0; i < cells.size(); ++i) t = add(t, Ordinal(1));
  return t;
}

WellorderE build_wellorder_E(const ReachabilityReport& r) {
  if (r.reached.empty()) throw PreconditionError("build_wellorder_E needs a nonempty report");
  WellorderE e;
  std::set<Ordinal> cells;
  for (const auto& [cell, idx] : r.reached) {
    cells.insert(cell);
    e.field.push_back(idx);
  }
  for (std::size_t i = 0; i < e.field.size(); ++i)
    for (std::size_t j = i + 1; j < e.field.size(); ++j) e.pairs.emplace_back(e.field[i], e.field[j]);
  e.order_type = order_type_of(cells);
  return e;
}

bool is_strict_total_order(const WellorderE& e) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> rel(e.pairs.begin(), e.pairs.end());
  std::set<std::uint64_t> field(e.field.begin(), e.field.end());
  if (field.size() != e.field.size()) return false;
  for (const auto& [a, b] : rel) {
    if (a == b || !field.count(a) || !field.count(b)) return false;
  }
  for (auto a : field)
    for (auto b : field) {
      if (a == b) continue;
      if (rel.count({a, b}) == rel.count({b, a})) return false;
      for (auto c : field)
        if (rel.count({a, b}) && rel.count({b, c}) && !rel.count({a, c})) return false;
    }
  return true;
}

std::vector<std::uint64_t> code_cells_for(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = i; j < n; ++j) out.push_back(pair_index(i, j));
  std::sort(out.begin(), out.end());
  return out;
}

Ordinal decode_order_code(const Tape& t) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> rel;
  std::set<std::uint64_t> field;
  for (auto c : finite_ones(t, "order code")) {
    auto pr = unpair_index(c);
    rel.insert(pr);
    if (pr.first == pr.second) field.insert(pr.first);
  }
  for (const auto& [a, b] : rel)
    if (!field.count(a) || !field.count(b)) throw PreconditionError("order code: relation is not reflexive");
  for (auto a : field)
    for (auto b : field) {
      if (a == b) continue;
      bool ab = rel.count({a, b}), ba = rel.count({b, a});
      if (ab == ba) throw PreconditionError("order code: not a linear order");
      for (auto c : field)
        if (ab && rel.count({b, c}) && !rel.count({a, c}))
          throw PreconditionError("order code: not transitive");
    }
  return Ordinal(static_cast<std::uint64_t>(field.size()));
}

Program order_code_writer(const Ordinal& delta, std::uint64_t n) {
  require_closed(delta);
  auto cells = code_cells_for(n);
  return unrolled_writer(delta, "order_code_" + std::to_string(n), 3, 2, {cells.begin(), cells.end()}, false);
}

Program addressing_program(const Program& writer, const Ordinal& beta_prime, const Budget& b) {
  if (writer.family != Family::Delta || !writer.delta)
    throw PreconditionError("addressing_program needs a delta program");
  if (writer.head_count() != 1) throw PreconditionError("addressing_program needs a single-head writer");
  auto res = DeltaMachine(*writer.delta).run(writer, {}, b);
  if (!res.halted()) throw PreconditionError("writer did not halt within budget: " + res.str());
  Ordinal beta = decode_order_code(res.final.tapes.back());
  if (beta < beta_prime)
    throw PreconditionError("cell " + beta_prime.str() + " lies beyond the coded ordinal " + beta.str());
  std::uint64_t target = finite_cell(beta_prime);

  std::vector<Move> walk;
  const CellAddr& h = res.final.heads.at(0);
  for (std::uint64_t i = 0; i < h.offset; ++i) walk.push_back(Move::Left);
  if (!h.base.is_zero()) walk.push_back(Move::Left);
  for (std::uint64_t i = 0; i < target; ++i) walk.push_back(Move::Right);

  Program out = writer;
  out.name = writer.name + "_to_" + std::to_string(target);
  if (walk.empty()) return out;

  std::size_t width = writer.width(), obs_count = std::size_t{1} << width;
  std::size_t first = out.states.size();
  for (std::size_t k = 0; k < walk.size(); ++k) {
    std::string name = "addr" + std::to_string(k);
    while (std::find(out.states.begin(), out.states.end(), name) != out.states.end()) name = "_" + name;
    out.states.push_back(name);
  }
  auto keep = [&](std::uint32_t o) {
    std::vector<std::uint8_t> w;
    for (char c : bits_of(o, width)) w.push_back(c == '1');
    return w;
  };
  for (std::size_t q = 0; q < first; ++q)
    for (std::uint32_t o = 0; o < obs_count; ++o) {
      auto& r = out.table[(q << width) | o];
      if (!r)
        r = TmRule{keep(o), {Move::Stay}, first};
      else if (r->next == kHalt)
        r->next = first;
    }
  out.table.resize(out.states.size() << width);
  for (std::size_t k = 0; k < walk.size(); ++k)
    for (std::uint32_t o = 0; o < obs_count; ++o)
      out.table[((first + k) << width) | o] =
          TmRule{keep(o), {walk[k]}, k + 1 < walk.size() ? first + k + 1 : kHalt};
  if (auto d = validate_program(out); !d.empty()) throw Error("addressing program failed validation");
  return out;
}

}  // namespace transfinite
