#include "transfinite/trace.hpp"

#include "transfinite/error.hpp"
#include "transfinite/machines.hpp"

#include <json.hpp>

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace transfinite {

using Json = nlohmann::ordered_json;

namespace {

constexpr int kFormat = 1;

std::string_view role_name(SnapshotRole r) {
  switch (r) {
    case SnapshotRole::Initial: return "initial";
    case SnapshotRole::Successor: return "successor";
    case SnapshotRole::Limit: return "limit";
  }
  return "?";
}

Json tapes_json(const std::vector<Tape>& tapes) {
  Json out = Json::array();
  for (const auto& t : tapes) {
    Json blocks = Json::array();
    for (const auto& [base, b] : t.blocks()) blocks.push_back(Json::array({base.str(), b.str()}));
    out.push_back(std::move(blocks));
  }
  return out;
}

Ordinal succ(const Ordinal& t) { return add(t, Ordinal(1)); }

// One step of whichever family p belongs to; false when the machine has
// no successor stage.
bool step_once(Snapshot& s, const Program& p, WriteLog* log) {
  if (p.is_tm()) {
    auto st = tm_step(s, p, log);
    return st == StepStatus::Continue || st == StepStatus::HaltExplicit;
  }
  auto st = bss_step(s, p);
  return st == StepStatus::Continue || st == StepStatus::HaltExplicit;
}

}  // namespace

struct TraceWriter::Impl {
  std::ostream& out;
  Program p;
  std::optional<Snapshot> prev;
  std::uint64_t n = 0;

  void line(const Json& j) {
    out << j.dump() << '\n';
    ++n;
  }

  void record(const Snapshot& s, SnapshotRole role, const CycleEvidence* ev) {
    Json j;
    j["kind"] = "snap";
    j["role"] = role_name(role);
    j["time"] = s.time.str();
    j["state"] = s.state;
    Json heads = Json::array();
    for (const auto& h : s.heads) heads.push_back(h.str());
    j["heads"] = std::move(heads);

    bool diffed = false;
    if (role == SnapshotRole::Successor && prev && succ(prev->time) == s.time) {
      Snapshot next = *prev;
      WriteLog log;
      if (step_once(next, p, &log) && next.same_configuration(s)) {
        diffed = true;
        if (p.is_tm()) {
          Json cells = Json::array();
          for (const auto& [t, c] : log) cells.push_back(Json::array({t, c.str(), s.tapes[t].get(c)}));
          j["cells"] = std::move(cells);
        } else {
          Json regs = Json::array();
          for (std::size_t i = 0; i < s.registers.size(); ++i)
            if (!(prev->registers[i] == s.registers[i])) regs.push_back(Json::array({i, s.registers[i].str()}));
          j["regs"] = std::move(regs);
        }
      }
    }
    if (!diffed) {
      j["tapes"] = tapes_json(s.tapes);
      Json regs = Json::array();
      for (const auto& r : s.registers) regs.push_back(r.str());
      j["registers"] = std::move(regs);
    }
    if (ev) j["evidence"] = ev->str();
    line(j);
    prev = s;
  }
};

TraceWriter::TraceWriter(std::ostream& out, const Program& p, const Budget& b, std::optional<LimitRule> rule)
    : impl_(std::make_unique<Impl>(Impl{out, p, std::nullopt, 0})) {
  Json h;
  h["kind"] = "header";
  h["format"] = kFormat;
  h["family"] = family_name(p.family);
  h["rule"] = rule ? std::string(limit_rule_name(*rule)) : std::string();
  h["budget"] = b.str();
  h["program"] = print_program(p);
  impl_->line(h);
}

TraceWriter::~TraceWriter() = default;

SnapshotObserver TraceWriter::observer() {
  Impl* impl = impl_.get();
  return [impl](const Snapshot& s, SnapshotRole role, const CycleEvidence* ev) { impl->record(s, role, ev); };
}

void TraceWriter::finish(const RunResult& r) {
  Json j;
  j["kind"] = "result";
  j["outcome"] = outcome_name(r.outcome);
  j["time"] = r.time.str();
  j["detail"] = r.detail;
  impl_->line(j);
  impl_->out.flush();
}

std::uint64_t TraceWriter::records() const noexcept { return impl_->n; }

std::string ReplayReport::str() const {
  std::ostringstream o;
  o << (ok ? "replay ok: " : "replay FAILED: ") << records << " records, " << successors_checked
    << " successor steps, " << limits_checked << " limits, " << rerun_checked << " rerun stages";
  if (!ok) o << "; " << failure;
  return o.str();
}

namespace {

struct Header {
  Program program;
  std::optional<LimitRule> rule;
  Budget budget;
};

Json parse_line(const std::string& text, std::uint64_t lineno) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw SyntaxError("trace line " + std::to_string(lineno) + ": " + e.what());
  }
}

template <typename T>
T field(const Json& j, const char* key, std::uint64_t lineno) {
  auto it = j.find(key);
  if (it == j.end()) throw SyntaxError("trace line " + std::to_string(lineno) + ": missing '" + key + "'");
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    throw SyntaxError("trace line " + std::to_string(lineno) + ": bad '" + key + "'");
  }
}

Snapshot rebuild(const Json& j, const std::optional<Snapshot>& prev, std::uint64_t lineno) {
  Snapshot s;
  bool full = j.contains("tapes") || j.contains("registers");
  if (!full) {
    if (!prev) throw SyntaxError("trace line " + std::to_string(lineno) + ": diff without a previous record");
    s = *prev;
  }
  s.time = Ordinal::parse(field<std::string>(j, "time", lineno));
  s.state = field<std::size_t>(j, "state", lineno);
  s.heads.clear();
  for (const auto& h : field<std::vector<std::string>>(j, "heads", lineno))
    s.heads.push_back(CellAddr::from_ordinal(Ordinal::parse(h)));
  if (full) {
    s.tapes.clear();
    for (const auto& blocks : field<Json>(j, "tapes", lineno)) {
      Tape t;
      for (const auto& b : blocks)
        t.put_block(Ordinal::parse(b.at(0).get<std::string>()), BitBlock::parse(b.at(1).get<std::string>()));
      s.tapes.push_back(std::move(t));
    }
    s.registers.clear();
    for (const auto& r : field<std::vector<std::string>>(j, "registers", lineno))
      s.registers.push_back(BssValue::parse(r));
  } else {
    if (j.contains("cells"))
      for (const auto& c : j.at("cells")) {
        auto t = c.at(0).get<std::size_t>();
        if (t >= s.tapes.size()) throw SyntaxError("trace line " + std::to_string(lineno) + ": bad tape");
        s.tapes[t].set(CellAddr::from_ordinal(Ordinal::parse(c.at(1).get<std::string>())),
                       c.at(2).get<std::uint8_t>());
      }
    if (j.contains("regs"))
      for (const auto& r : j.at("regs")) {
        auto i = r.at(0).get<std::size_t>();
        if (i >= s.registers.size()) throw SyntaxError("trace line " + std::to_string(lineno) + ": bad register");
        s.registers[i] = BssValue::parse(r.at(1).get<std::string>());
      }
  }
  return s;
}

}  // namespace

ReplayReport replay_trace(std::istream& in) {
  ReplayReport rep;
  std::string text;
  std::uint64_t lineno = 0;
  std::optional<Header> header;
  std::optional<Snapshot> prev, initial;
  std::map<Ordinal, Snapshot> rerun;  // stages the engine must reproduce
  std::optional<Json> result;

  auto fail = [&](std::string why) {
    if (rep.failure.empty()) rep.failure = std::move(why);
  };

  try {
    while (std::getline(in, text)) {
      ++lineno;
      if (text.empty()) continue;
      Json j = parse_line(text, lineno);
      auto kind = field<std::string>(j, "kind", lineno);
      if (kind == "header") {
        if (header) throw SyntaxError("trace line " + std::to_string(lineno) + ": second header");
        if (field<int>(j, "format", lineno) != kFormat) throw SyntaxError("unsupported trace format");
        Header h;
        h.program = parse_program(field<std::string>(j, "program", lineno));
        if (h.program.family != parse_family(field<std::string>(j, "family", lineno)))
          throw SyntaxError("trace header family does not match its program");
        auto rule = field<std::string>(j, "rule", lineno);
        if (!rule.empty()) h.rule = parse_limit_rule(rule);
        h.budget = Budget::parse(field<std::string>(j, "budget", lineno));
        header = std::move(h);
        continue;
      }
      if (!header) throw SyntaxError("trace does not start with a header");
      if (kind == "result") {
        result = j;
        continue;
      }
      if (kind != "snap") throw SyntaxError("trace line " + std::to_string(lineno) + ": unknown kind " + kind);
      ++rep.records;
      Snapshot s = rebuild(j, prev, lineno);
      auto role = field<std::string>(j, "role", lineno);
      if (role == "initial") {
        if (initial) throw SyntaxError("trace line " + std::to_string(lineno) + ": second initial record");
        initial = s;
      } else if (role == "successor" && prev && succ(prev->time) == s.time) {
        Snapshot next = *prev;
        if (!step_once(next, header->program, nullptr) || !next.same_configuration(s) || next.time != s.time)
          fail("stage " + s.time.str() + " is not one step after " + prev->time.str());
        ++rep.successors_checked;
      } else if (role == "successor" || role == "limit") {
        (role == "limit" ? rep.limits_checked : rep.rerun_checked) += 1;
        rerun.emplace(s.time, s);
      } else {
        throw SyntaxError("trace line " + std::to_string(lineno) + ": unknown role " + role);
      }
      if (prev && !(prev->time < s.time)) fail("times do not increase at " + s.time.str());
      prev = std::move(s);
    }
    if (!header) throw SyntaxError("empty trace");
    if (!initial) throw SyntaxError("trace has no initial record");

    std::unique_ptr<MachineModel> model;
    if (header->program.is_tm())
      model = std::make_unique<TmModel>(header->program, *initial);
    else
      model = std::make_unique<RegisterModel>(header->program, *initial,
                                              IbssmConfig{header->rule.value_or(LimitRule::Liminf)});

    std::map<Ordinal, Snapshot> seen;
    RunResult again = run_machine(*model, header->budget, [&](const Snapshot& s, SnapshotRole, const CycleEvidence*) {
      if (rerun.count(s.time)) seen.emplace(s.time, s);
    });
    for (const auto& [t, s] : rerun) {
      auto it = seen.find(t);
      if (it == seen.end())
        fail("the engine never reported stage " + t.str());
      else if (!it->second.same_configuration(s))
        fail("stage " + t.str() + " differs from the engine's");
    }
    if (!result) {
      fail("trace has no result record");
    } else {
      auto outcome = field<std::string>(*result, "outcome", lineno);
      auto time = field<std::string>(*result, "time", lineno);
      if (outcome != outcome_name(again.outcome) || time != again.time.str())
        fail("result " + outcome + " at " + time + " but the engine gives " + again.str());
    }
  } catch (const SyntaxError&) {
    throw;
  } catch (const Error& e) {
    throw SyntaxError(std::string("trace: ") + e.what());
  }
  rep.ok = rep.failure.empty();
  return rep;
}

}  // namespace transfinite
