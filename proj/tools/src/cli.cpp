#include "tfm/cli.hpp"

#include "transfinite/transfinite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace tfm {

using namespace transfinite;
using Json = nlohmann::ordered_json;

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Halted: return 0;
    case Outcome::Looping: return 2;
    case Outcome::Unresolved: return 3;
    case Outcome::Crashed:
    case Outcome::ContinuityViolation: return 4;
  }
  return kExitUsage;
}

namespace {

constexpr const char* kDefaultBudget = "steps=100000,level=2,snaps=1000";

// Thrown for bad flag combinations found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  return f;
}

Budget budget_of(const std::string& text) {
  Budget b = Budget::parse(text);
  b.validate();
  return b;
}

struct RunOpts {
  std::string program, family, input, marks, rule = "liminf", budget = kDefaultBudget, trace;
  bool params = false, show_final = false;
};

int cmd_run(const RunOpts& o, std::ostream& out) {
  Program p = load_program(o.program);
  if (!o.family.empty() && parse_family(o.family) != p.family)
    throw UsageError("--family " + o.family + " does not match the program's family " +
                     std::string(family_name(p.family)));
  Budget b = budget_of(o.budget);
  std::optional<LimitRule> rule;
  if (p.family == Family::IBSSM) rule = parse_limit_rule(o.rule);
  if (!o.marks.empty() && (p.family == Family::ITTM || p.family == Family::IBSSM))
    throw UsageError("--marks applies to otm and delta programs");

  std::optional<std::ofstream> trace_file;
  std::optional<TraceWriter> writer;
  SnapshotObserver obs;
  if (!o.trace.empty()) {
    trace_file.emplace(open_out(o.trace));
    writer.emplace(*trace_file, p, b, rule);
    obs = writer->observer();
  }

  std::vector<Ordinal> marks;
  if (!o.marks.empty())
    for (const auto& c : parse_marks(o.marks)) marks.push_back(c.ordinal());
  else if (p.family == Family::OTM || p.family == Family::Delta)
    for (const auto& c : parse_bit_input(o.input)) marks.push_back(c.ordinal());

  RunResult r;
  switch (p.family) {
    case Family::ITTM: r = ittm_run(p, o.input, b, obs); break;
    case Family::OTM: r = otm_run(p, marks, b, obs); break;
    case Family::Delta: r = DeltaMachine(*p.delta, o.params).run(p, marks, b, obs); break;
    case Family::IBSSM: r = run_ibssm(p, parse_rational_list(o.input), b, IbssmConfig{*rule}, obs); break;
  }
  if (writer) writer->finish(r);

  out << r.str() << '\n';
  if (p.family == Family::IBSSM) {
    out << "r0 settled: " << (r.r0_settled ? "yes" : "no") << '\n';
    if (r.halted() && *rule == LimitRule::Continuity)
      out << "halting bound w^(k+1): " << (check_halting_bound(p, r) ? "holds" : "VIOLATED") << '\n';
  }
  if (p.is_tm() && r.outcome != Outcome::Unresolved) {
    out << "heads:";
    for (const auto& h : r.final.heads) out << ' ' << h.str();
    out << '\n';
  }
  if (o.show_final) out << r.final.str() << '\n';
  return exit_code(r.outcome);
}

int cmd_compile(const std::string& in, const std::string& outpath, std::ostream& out) {
  Program c = compile_ittm_to_ibssm(load_program(in));
  std::string text = print_program(c);
  if (outpath.empty()) {
    out << text;
  } else {
    open_out(outpath) << text;
    out << "compiled " << in << ": " << c.nodes.size() << " nodes, " << c.register_count << " registers\n";
  }
  return 0;
}

int cmd_bisim(const std::string& program, const std::string& input, const std::string& budget,
              const std::string& report, std::ostream& out) {
  Program p = load_program(program);
  BisimReport rep = bisimulate(p, input, budget_of(budget));
  out << rep.str() << '\n';
  if (!report.empty()) {
    Json j;
    j["program"] = p.name;
    j["input"] = input;
    j["budget"] = budget;
    j["agree"] = rep.agree;
    j["inconclusive"] = rep.inconclusive;
    j["checkpoints"] = rep.checkpoints;
    j["limit_checkpoints"] = rep.limit_checkpoints;
    j["max_limit_level"] = rep.max_limit_level;
    j["divergence"] = rep.divergence;
    j["ittm"] = rep.ittm.str();
    j["ibssm"] = rep.ibssm.str();
    open_out(report) << j.dump() << '\n';
  }
  if (rep.agree) return 0;
  return rep.inconclusive ? 3 : 4;
}

struct SurveyOpts {
  std::string delta = "w^w", budget = "steps=2000,level=1,snaps=50", out;
  std::uint64_t bound = 1000;
  std::size_t threads = 0, max_states = 2;
  bool no_seeds = false;
};

int cmd_survey(const SurveyOpts& o, std::ostream& out) {
  Ordinal delta = Ordinal::parse(o.delta);
  std::vector<Program> seeds;
  if (!o.no_seeds) seeds.push_back(marcher_halt_at_limit(delta));
  auto rep = reachability_survey(delta, o.bound, budget_of(o.budget), seeds, o.max_states, o.threads);
  std::uint64_t halted = 0;
  for (const auto& r : rep.records) halted += r.outcome == Outcome::Halted;
  out << "surveyed " << rep.records.size() << " programs (delta " << delta.str() << ", " << rep.bound
      << " enumerated, " << rep.seeds.size() << " seeded) at budget " << rep.budget.str() << '\n';
  out << halted << " halted, " << rep.unresolved.size() << " unresolved\n";
  out << "reached at this budget (absence proves nothing):\n";
  for (const auto& [cell, e] : rep.reached) out << "  cell " << cell.str() << " <- program " << e << '\n';
  if (!rep.reached.empty()) {
    auto e = build_wellorder_E(rep);
    out << "E order type " << e.order_type.str() << (is_strict_total_order(e) ? "" : " (NOT a total order)")
        << '\n';
  }
  if (!o.out.empty()) {
    auto f = open_out(o.out);
    for (const auto& r : rep.records) {
      Json j;
      j["index"] = r.index;
      j["outcome"] = outcome_name(r.outcome);
      j["time"] = r.time.str();
      j["head"] = r.head ? r.head->str() : std::string();
      f << j.dump() << '\n';
    }
  }
  return 0;
}

int cmd_torus(const std::string& map, const std::string& point, const std::string& alpha,
              const std::string& budget, bool probe, std::ostream& out) {
  TorusMap f = TorusMap::parse(read_file(map));
  Budget b = budget_of(budget);
  if (probe) {
    std::vector<TorusPoint> pts;
    std::string_view rest = point;
    while (!rest.empty()) {
      auto semi = rest.find(';');
      pts.push_back(parse_point(rest.substr(0, semi)));
      rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    }
    for (const auto& [x, t] : torus_origin_probe(f, pts, b))
      out << point_str(x) << ": " << (t ? "origin at " + t->str() : std::string("not found within budget")) << '\n';
    return 0;
  }
  auto r = iterate_torus(f, parse_point(point), Ordinal::parse(alpha), b);
  if (!r.resolved) {
    out << "unresolved: " << r.stop.str() << '\n';
    return exit_code(Outcome::Unresolved);
  }
  out << point_str(r.point) << '\n';
  return 0;
}

int cmd_replay(const std::string& path, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  auto rep = replay_trace(in);
  out << rep.str() << '\n';
  return rep.ok ? 0 : 4;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"tfm: transfinite machine laboratory"};
  app.set_config("--config", "", "TOML/INI file whose [subcommand] sections mirror the flags");
  app.require_subcommand(1);

  RunOpts run;
  auto* r = app.add_subcommand("run", "run a program");
  r->add_option("--program", run.program, "program file")->required();
  r->add_option("--family", run.family, "ittm | otm | delta | ibssm (checked against the file)");
  r->add_option("--input", run.input, "input bits, or rationals for ibssm");
  r->add_option("--marks", run.marks, "marked cells as ordinals, e.g. \"w, w*2+1\"");
  r->add_option("--rule", run.rule, "ibssm limit rule: liminf | continuity");
  r->add_option("--budget", run.budget, "steps=N,level=K,snaps=M");
  r->add_option("--trace", run.trace, "write a JSONL trace");
  r->add_flag("--params", run.params, "delta: allow marked cells");
  r->add_flag("--show-final", run.show_final, "print the final configuration");

  std::string c_in, c_out;
  auto* c = app.add_subcommand("compile", "compile an ittm program to an ibssm flow chart");
  c->add_option("--in", c_in, "ittm program")->required();
  c->add_option("--out", c_out, "output file (stdout if absent)");

  std::string b_prog, b_input, b_budget = kDefaultBudget, b_report;
  auto* bs = app.add_subcommand("bisim", "run an ittm program against its compilation");
  bs->add_option("--program", b_prog, "ittm program")->required();
  bs->add_option("--input", b_input, "input bits");
  bs->add_option("--budget", b_budget, "steps=N,level=K,snaps=M");
  bs->add_option("--report", b_report, "write the report as JSONL");

  SurveyOpts sv;
  auto* s = app.add_subcommand("survey", "budgeted reachability survey of parameterless delta programs");
  s->add_option("--delta", sv.delta, "tape length, e.g. w^w");
  s->add_option("--bound", sv.bound, "number of enumerated programs");
  s->add_option("--budget", sv.budget, "steps=N,level=K,snaps=M");
  s->add_option("--out", sv.out, "write records as JSONL");
  s->add_option("--threads", sv.threads, "workers (0: all cores)");
  s->add_option("--max-states", sv.max_states, "largest state count enumerated");
  s->add_flag("--no-seeds", sv.no_seeds, "skip the seeded marcher");

  std::string t_map, t_point, t_alpha = "w", t_budget = "steps=10000,level=2,snaps=100";
  bool t_probe = false;
  auto* t = app.add_subcommand("torus", "iterate an affine torus map transfinitely");
  t->add_option("--map", t_map, "map file")->required();
  t->add_option("--point", t_point, "start point; with --probe a ';'-separated list")->required();
  t->add_option("--alpha", t_alpha, "stage");
  t->add_option("--budget", t_budget, "steps=N,level=K,snaps=M");
  t->add_flag("--probe", t_probe, "report the least stage each point sits at the origin");

  std::string rp_file;
  auto* rp = app.add_subcommand("replay", "re-verify a JSONL trace");
  rp->add_option("trace", rp_file, "trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*r) return cmd_run(run, out);
    if (*c) return cmd_compile(c_in, c_out, out);
    if (*bs) return cmd_bisim(b_prog, b_input, b_budget, b_report, out);
    if (*s) return cmd_survey(sv, out);
    if (*t) return cmd_torus(t_map, t_point, t_alpha, t_budget, t_probe, out);
    if (*rp) return cmd_replay(rp_file, out);
  } catch (const UsageError& e) {
    err << "tfm: " << e.what() << '\n';
  } catch (const Error& e) {
    err << "tfm: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "tfm: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace tfm
