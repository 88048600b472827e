#include "transfinite/program.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace transfinite {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::ITTM: return "ittm";
    case Family::OTM: return "otm";
    case Family::Delta: return "delta";
    case Family::IBSSM: return "ibssm";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  if (s == "ittm") return Family::ITTM;
  if (s == "otm") return Family::OTM;
  if (s == "delta") return Family::Delta;
  if (s == "ibssm") return Family::IBSSM;
  throw SyntaxError("unknown family " + std::string(s));
}

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Copy: return "copy";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Branch: return "branch";
    case Op::Halt: return "halt";
    case Op::DInit: return "dinit";
    case Op::DRead: return "dread";
    case Op::DMove: return "dmove";
    case Op::DReset: return "dreset";
  }
  return "?";
}

std::size_t Program::width() const noexcept {
  std::size_t w = 0;
  for (const auto& h : heads) w += h.tapes.size();
  return w;
}

std::size_t Program::rule_count() const {
  return static_cast<std::size_t>(
      std::count_if(table.begin(), table.end(), [](const auto& r) { return r.has_value(); }));
}

std::size_t Program::computation_nodes() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const BssNode& n) { return n.op != Op::Halt; }));
}

std::vector<bool> Program::writable_tapes() const {
  std::vector<bool> out(tape_count, false);
  std::size_t w = width();
  for (std::size_t idx = 0; idx < table.size(); ++idx) {
    if (!table[idx]) continue;
    auto obs = static_cast<std::uint32_t>(idx & ((std::size_t{1} << w) - 1));
    std::size_t slot = 0;
    for (const auto& h : heads) {
      for (std::size_t t : h.tapes) {
        std::uint8_t seen = (obs >> (w - 1 - slot)) & 1U;
        if (table[idx]->write[slot] != seen) out[t] = true;
        ++slot;
      }
    }
  }
  return out;
}

std::optional<std::string> Program::meta_value(std::string_view key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return v;
  return std::nullopt;
}

void Program::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : meta) {
    if (k == key) {
      v = value;
      return;
    }
  }
  meta.emplace_back(key, value);
}

std::string observation_text(std::uint32_t obs, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i)
    if ((obs >> (width - 1 - i)) & 1U) s[i] = '1';
  return s;
}

namespace {

struct Token {
  std::string text;
  std::size_t col = 0;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == ':' || c == '|') {
      out.push_back({std::string(1, c), i + 1});
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != ':' &&
           line[i] != '|' && line[i] != '#')
      ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

std::optional<std::string> double_write(const Program& p, std::uint32_t obs, const TmRule& r) {
  std::size_t w = p.width();
  std::vector<std::pair<std::size_t, std::size_t>> slots;  // (head, tape)
  for (std::size_t h = 0; h < p.heads.size(); ++h)
    for (std::size_t t : p.heads[h].tapes) slots.emplace_back(h, t);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    for (std::size_t j = i + 1; j < slots.size(); ++j) {
      if (slots[i].first == slots[j].first || slots[i].second != slots[j].second) continue;
      std::uint8_t bi = (obs >> (w - 1 - i)) & 1U;
      std::uint8_t bj = (obs >> (w - 1 - j)) & 1U;
      if (bi == bj && r.write[i] != r.write[j])
        return "heads " + std::to_string(slots[i].first) + " and " + std::to_string(slots[j].first) +
               " on tape " + std::to_string(slots[i].second);
    }
  }
  return std::nullopt;
}

struct RawRule {
  std::size_t line;
  Token state, obs, write, move, target;
};

struct RawNode {
  std::size_t line;
  std::size_t col;
  std::size_t index;
  std::vector<Token> body;  // tokens after ':'
};

class ProgramParser {
public:
  explicit ProgramParser(std::string_view text) : text_(text) {}

  Program run() {
    std::istringstream in{std::string(text_)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto toks = tokenize(line);
      if (toks.empty()) continue;
      directive(lineno, line, toks);
    }
    finish();
    if (!diags_.empty()) throw ProgramError(diags_);
    auto more = validate_program(prog_);
    if (!more.empty()) throw ProgramError(more);
    return prog_;
  }

private:
  void error(std::size_t line, std::size_t col, std::string msg) {
    diags_.push_back(Diagnostic{line, col, std::move(msg)});
  }

  std::optional<std::size_t> number(std::size_t line, const Token& t) {
    if (t.text.empty() || !std::all_of(t.text.begin(), t.text.end(),
                                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      error(line, t.col, "expected a number, got '" + t.text + "'");
      return std::nullopt;
    }
    try {
      return static_cast<std::size_t>(std::stoull(t.text));
    } catch (const std::exception&) {
      error(line, t.col, "number out of range '" + t.text + "'");
      return std::nullopt;
    }
  }

  void directive(std::size_t ln, const std::string& line, const std::vector<Token>& t) {
    const std::string& kw = t[0].text;
    auto need = [&](std::size_t n) {
      if (t.size() < n) {
        error(ln, t.back().col + t.back().text.size(), "missing operand for '" + kw + "'");
        return false;
      }
      return true;
    };
    if (kw == "family") {
      if (!need(2)) return;
      try {
        prog_.family = parse_family(t[1].text);
        have_family_ = true;
      } catch (const SyntaxError&) {
        error(ln, t[1].col, "unknown family " + t[1].text);
      }
    } else if (kw == "name") {
      if (!need(2)) return;
      prog_.name = t[1].text;
    } else if (kw == "input") {
      if (!need(2)) return;
      if (auto n = number(ln, t[1])) prog_.input_arity = *n;
    } else if (kw == "tapes") {
      if (!need(2)) return;
      if (auto n = number(ln, t[1])) prog_.tape_count = *n;
    } else if (kw == "head") {
      if (!need(4)) return;
      auto idx = number(ln, t[1]);
      if (!idx) return;
      if (t[2].text != ":") {
        error(ln, t[2].col, "expected ':'");
        return;
      }
      if (*idx != prog_.heads.size()) {
        error(ln, t[1].col, "heads must be declared in order; expected head " +
                                std::to_string(prog_.heads.size()));
        return;
      }
      HeadSpec h;
      for (std::size_t i = 3; i < t.size(); ++i)
        if (auto n = number(ln, t[i])) h.tapes.push_back(*n);
      prog_.heads.push_back(h);
      head_line_.push_back({ln, t[0].col});
    } else if (kw == "states") {
      if (!need(2)) return;
      for (std::size_t i = 1; i < t.size(); ++i) {
        if (state_index_.count(t[i].text)) {
          error(ln, t[i].col, "duplicate state " + t[i].text);
          continue;
        }
        if (t[i].text == "halt") {
          error(ln, t[i].col, "'halt' is reserved");
          continue;
        }
        state_index_[t[i].text] = prog_.states.size();
        prog_.states.push_back(t[i].text);
      }
    } else if (kw == "start") {
      if (!need(2)) return;
      start_ = t[1];
      start_line_ = ln;
    } else if (kw == "delta") {
      if (!need(2)) return;
      auto pos = line.find("delta");
      try {
        prog_.delta = Ordinal::parse(std::string_view(line).substr(pos + 5));
      } catch (const Error& e) {
        error(ln, t[1].col, e.what());
      }
    } else if (kw == "registers") {
      if (!need(2)) return;
      if (auto n = number(ln, t[1])) prog_.register_count = *n;
    } else if (kw == "rule") {
      // rule STATE OBS -> WRITE MOVE TARGET
      if (t.size() != 7 || t[3].text != "->") {
        error(ln, t[0].col, "expected 'rule STATE OBS -> WRITE MOVES TARGET'");
        return;
      }
      rules_.push_back(RawRule{ln, t[1], t[2], t[4], t[5], t[6]});
    } else if (kw == "node") {
      if (!need(3)) return;
      auto idx = number(ln, t[1]);
      if (!idx) return;
      if (t[2].text != ":") {
        error(ln, t[2].col, "expected ':'");
        return;
      }
      nodes_.push_back(RawNode{ln, t[0].col, *idx, std::vector<Token>(t.begin() + 3, t.end())});
    } else if (kw == "meta") {
      if (!need(2)) return;
      std::string value;
      if (t.size() > 2) {
        std::size_t vstart = t[2].col - 1;
        std::size_t vend = line.find('#', vstart);
        value = line.substr(vstart, vend == std::string::npos ? std::string::npos : vend - vstart);
        while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) value.pop_back();
      }
      prog_.set_meta(t[1].text, value);
    } else {
      error(ln, t[0].col, "unknown directive '" + kw + "'");
    }
  }

  std::optional<std::size_t> target(std::size_t ln, const Token& t) {
    if (t.text == "halt") return kHalt;
    auto it = state_index_.find(t.text);
    if (it == state_index_.end()) {
      error(ln, t.col, "unknown state " + t.text);
      return std::nullopt;
    }
    return it->second;
  }

  void finish() {
    if (!have_family_) error(1, 1, "missing 'family' declaration");
    if (prog_.family == Family::IBSSM)
      finish_ibssm();
    else
      finish_tm();
  }

  void finish_tm() {
    if (!nodes_.empty()) error(nodes_.front().line, nodes_.front().col, "node lines need family ibssm");
    if (prog_.register_count != 0) error(1, 1, "registers need family ibssm");
    if (prog_.states.empty()) error(1, 1, "missing 'states' declaration");
    if (prog_.heads.empty()) error(1, 1, "missing 'head' declaration");
    if (prog_.tape_count == 0) error(1, 1, "missing 'tapes' declaration");
    if (start_) {
      auto it = state_index_.find(start_->text);
      if (it == state_index_.end())
        error(start_line_, start_->col, "unknown state " + start_->text);
      else
        prog_.start = it->second;
    } else if (!prog_.states.empty()) {
      error(1, 1, "missing 'start' declaration");
    }
    std::size_t w = prog_.width();
    if (w > 16) {
      error(1, 1, "observation width " + std::to_string(w) + " exceeds 16");
      return;
    }
    if (!diags_.empty()) return;
    prog_.table.assign(prog_.states.size() << w, std::nullopt);
    std::vector<std::size_t> defined_at(prog_.table.size(), 0);
    std::size_t h = prog_.head_count();
    for (const auto& r : rules_) {
      auto st = target(r.line, r.state);
      if (st && *st == kHalt) {
        error(r.line, r.state.col, "a rule cannot start in halt");
        st.reset();
      }
      auto nx = target(r.line, r.target);
      std::string obs = r.obs.text == "*" ? std::string(w, '*') : r.obs.text;
      std::string wr = r.write.text == "_" ? std::string(w, '_') : r.write.text;
      bool ok = st && nx;
      if (obs.size() != w || obs.find_first_not_of("01*") != std::string::npos) {
        error(r.line, r.obs.col, "observation '" + r.obs.text + "' needs " + std::to_string(w) +
                                     " symbols from 0 1 *");
        ok = false;
      }
      if (wr.size() != w || wr.find_first_not_of("01_") != std::string::npos) {
        error(r.line, r.write.col,
              "write '" + r.write.text + "' needs " + std::to_string(w) + " symbols from 0 1 _");
        ok = false;
      }
      if (r.move.text.size() != h || r.move.text.find_first_not_of("LRS") != std::string::npos) {
        error(r.line, r.move.col,
              "moves '" + r.move.text + "' needs " + std::to_string(h) + " symbols from L R S");
        ok = false;
      }
      if (!ok) continue;
      std::vector<Move> moves;
      for (char c : r.move.text) moves.push_back(c == 'L' ? Move::Left : c == 'R' ? Move::Right : Move::Stay);
      for (std::uint32_t o = 0; o < (1U << w); ++o) {
        bool match = true;
        for (std::size_t i = 0; i < w && match; ++i) {
          char want = obs[i];
          std::uint8_t bit = (o >> (w - 1 - i)) & 1U;
          if (want != '*' && static_cast<std::uint8_t>(want - '0') != bit) match = false;
        }
        if (!match) continue;
        TmRule rule;
        rule.move = moves;
        rule.next = *nx;
        for (std::size_t i = 0; i < w; ++i) {
          std::uint8_t bit = (o >> (w - 1 - i)) & 1U;
          rule.write.push_back(wr[i] == '_' ? bit : static_cast<std::uint8_t>(wr[i] - '0'));
        }
        std::size_t idx = (*st << w) | o;
        if (prog_.table[idx]) {
          error(r.line, r.obs.col,
                "duplicate rule for state " + prog_.states[*st] + " observing " + observation_text(o, w) +
                    " (first at line " + std::to_string(defined_at[idx]) + ")");
          continue;
        }
        prog_.table[idx] = std::move(rule);
        defined_at[idx] = r.line;
      }
    }
    // same-cell double writes: heads sharing a tape that see the same bit
    // there may be on the same cell
    for (std::size_t idx = 0; idx < prog_.table.size(); ++idx) {
      const auto& rule = prog_.table[idx];
      if (!rule) continue;
      auto o = static_cast<std::uint32_t>(idx & ((std::size_t{1} << w) - 1));
      if (auto clash = double_write(prog_, o, *rule))
        error(defined_at[idx], 1,
              "rule for state " + prog_.states[idx >> w] + " observing " + observation_text(o, w) +
                  " may write one cell twice (" + *clash + ")");
    }
  }

  std::optional<std::size_t> reg(std::size_t ln, const Token& t) {
    if (t.text.size() < 2 || t.text[0] != 'r') {
      error(ln, t.col, "expected a register, got '" + t.text + "'");
      return std::nullopt;
    }
    Token rest{t.text.substr(1), t.col + 1};
    auto n = number(ln, rest);
    if (n && *n >= prog_.register_count) {
      error(ln, t.col, "register " + t.text + " out of range");
      return std::nullopt;
    }
    return n;
  }

  std::optional<std::size_t> node_target(std::size_t ln, const Token& t, std::size_t count) {
    if (t.text == "halt") return kHalt;
    auto n = number(ln, t);
    if (n && *n >= count) {
      error(ln, t.col, "unknown node " + t.text);
      return std::nullopt;
    }
    return n;
  }

  void finish_ibssm() {
    if (!rules_.empty()) error(rules_.front().line, 1, "rule lines need a Turing family");
    if (!prog_.heads.empty() || prog_.tape_count != 0 || !prog_.states.empty())
      error(1, 1, "tapes, heads and states need a Turing family");
    if (prog_.register_count == 0) error(1, 1, "missing 'registers' declaration");
    if (nodes_.empty()) error(1, 1, "an ibssm program needs at least one node");
    std::size_t count = nodes_.size();
    std::vector<bool> seen(count, false);
    prog_.nodes.assign(count, BssNode{});
    for (const auto& raw : nodes_) {
      if (raw.index >= count) {
        error(raw.line, raw.col, "node numbers must be contiguous from 0");
        continue;
      }
      if (seen[raw.index]) {
        error(raw.line, raw.col, "duplicate node " + std::to_string(raw.index));
        continue;
      }
      seen[raw.index] = true;
      if (auto n = node(raw, count)) prog_.nodes[raw.index] = *n;
    }
  }

  std::optional<BssNode> node(const RawNode& raw, std::size_t count) {
    const auto& b = raw.body;
    std::size_t ln = raw.line;
    if (b.empty()) {
      error(ln, raw.col, "missing operation");
      return std::nullopt;
    }
    static const std::map<std::string, std::pair<Op, std::size_t>> ops = {
        {"const", {Op::Const, 2}}, {"copy", {Op::Copy, 2}},   {"add", {Op::Add, 3}},
        {"sub", {Op::Sub, 3}},     {"mul", {Op::Mul, 3}},     {"div", {Op::Div, 3}},
        {"branch", {Op::Branch, 2}}, {"halt", {Op::Halt, 0}}, {"dinit", {Op::DInit, 1}},
        {"dread", {Op::DRead, 5}}, {"dmove", {Op::DMove, 4}}, {"dreset", {Op::DReset, 3}}};
    auto it = ops.find(b[0].text);
    if (it == ops.end()) {
      error(ln, b[0].col, "unknown operation '" + b[0].text + "'");
      return std::nullopt;
    }
    BssNode n;
    n.op = it->second.first;
    std::size_t arity = it->second.second;
    if (n.op == Op::Halt) {
      if (b.size() != 1) error(ln, b[1].col, "halt takes no operands");
      return n;
    }
    // operands, '->', target [ '|' alt ]
    std::size_t arrow = 1 + arity;
    if (b.size() < arrow + 2 || b[arrow].text != "->") {
      error(ln, b[0].col, "expected '" + b[0].text + "' with " + std::to_string(arity) +
                              " operands followed by '-> target'");
      return std::nullopt;
    }
    bool ok = true;
    auto regs_only = [&](std::size_t k) {
      for (std::size_t i = 1; i <= k; ++i) {
        auto r = reg(ln, b[i]);
        if (!r) ok = false;
        else n.regs.push_back(*r);
      }
    };
    auto ints_from = [&](std::size_t i) -> std::uint64_t {
      auto v = number(ln, b[i]);
      if (!v) ok = false;
      return v.value_or(0);
    };
    switch (n.op) {
      case Op::Const: {
        regs_only(1);
        try {
          n.constant = parse_rational(b[2].text);
        } catch (const Error& e) {
          error(ln, b[2].col, e.what());
          ok = false;
        }
        break;
      }
      case Op::Copy: regs_only(2); break;
      case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Branch:
        regs_only(arity);
        break;
      case Op::DInit: regs_only(1); break;
      case Op::DRead:
        regs_only(3);
        n.stride = ints_from(4);
        n.offset = ints_from(5);
        break;
      case Op::DMove:
        regs_only(2);
        n.stride = ints_from(3);
        n.offset = ints_from(4);
        break;
      case Op::DReset:
        regs_only(1);
        n.stride = ints_from(2);
        n.offset = ints_from(3);
        break;
      case Op::Halt: break;
    }
    if ((n.op == Op::DRead || n.op == Op::DMove || n.op == Op::DReset) && ok && n.stride == 0) {
      error(ln, b[0].col, "stride must be positive");
      ok = false;
    }
    auto t = node_target(ln, b[arrow + 1], count);
    if (!t) ok = false;
    else n.next = *t;
    std::size_t rest = arrow + 2;
    if (n.op == Op::Branch) {
      if (b.size() != rest + 2 || b[rest].text != "|") {
        error(ln, b[0].col, "branch needs '-> target | alternative'");
        return std::nullopt;
      }
      auto a = node_target(ln, b[rest + 1], count);
      if (!a) ok = false;
      else n.alt = *a;
    } else if (b.size() != rest) {
      error(ln, b[rest].col, "unexpected '" + b[rest].text + "'");
      ok = false;
    }
    if (!ok) return std::nullopt;
    return n;
  }

  std::string_view text_;
  Program prog_;
  bool have_family_ = false;
  std::map<std::string, std::size_t> state_index_;
  std::optional<Token> start_;
  std::size_t start_line_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> head_line_;
  std::vector<RawRule> rules_;
  std::vector<RawNode> nodes_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validate_program(const Program& p) {
  std::vector<Diagnostic> out;
  auto err = [&](std::string msg) { out.push_back(Diagnostic{0, 0, std::move(msg)}); };
  if (p.is_tm()) {
    if (p.tape_count == 0) err("a Turing program needs at least one tape");
    if (p.heads.empty()) err("a Turing program needs at least one head");
    for (std::size_t h = 0; h < p.heads.size(); ++h) {
      const auto& hs = p.heads[h];
      if (hs.tapes.empty()) err("head " + std::to_string(h) + " reads no tape");
      std::set<std::size_t> uniq(hs.tapes.begin(), hs.tapes.end());
      if (uniq.size() != hs.tapes.size()) err("head " + std::to_string(h) + " lists a tape twice");
      for (auto t : hs.tapes)
        if (t >= p.tape_count) err("head " + std::to_string(h) + " reads undeclared tape " + std::to_string(t));
    }
    if (p.states.empty()) err("a Turing program needs at least one state");
    if (p.start >= p.states.size() && !p.states.empty()) err("start state out of range");
    std::size_t w = p.width();
    if (w <= 16 && p.table.size() != (p.states.size() << w)) err("transition table has the wrong size");
    for (const auto& r : p.table) {
      if (!r) continue;
      if (r->write.size() != w || r->move.size() != p.heads.size()) {
        err("rule arity does not match the head declaration");
        break;
      }
      if (r->next != kHalt && r->next >= p.states.size()) {
        err("rule targets an unknown state");
        break;
      }
    }
    if (w <= 16 && p.table.size() == (p.states.size() << w)) {
      for (std::size_t idx = 0; idx < p.table.size(); ++idx) {
        const auto& r = p.table[idx];
        if (!r || r->write.size() != w) continue;
        auto o = static_cast<std::uint32_t>(idx & ((std::size_t{1} << w) - 1));
        if (auto clash = double_write(p, o, *r))
          err("rule for state " + p.states[idx >> w] + " observing " + observation_text(o, w) +
              " may write one cell twice (" + *clash + ")");
      }
    }
    if (p.family == Family::ITTM && p.delta) err("family ittm takes no delta");
    if (p.family == Family::OTM && p.delta) err("family otm takes no delta");
    if (p.family == Family::Delta) {
      if (!p.delta) {
        err("family delta needs a 'delta' declaration");
      } else if (!p.delta->is_limit()) {
        err("delta must be a limit ordinal");
      } else if (!is_pairing_closed(*p.delta, 64)) {
        err("delta " + p.delta->str() + " is not closed under pairing");
      }
    }
  } else {
    if (p.register_count == 0) err("an ibssm program needs registers");
    if (p.nodes.empty()) err("an ibssm program needs nodes");
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      const auto& n = p.nodes[i];
      for (auto r : n.regs)
        if (r >= p.register_count) err("node " + std::to_string(i) + " uses an undeclared register");
      auto bad = [&](std::size_t t) { return t != kHalt && t >= p.nodes.size(); };
      if (bad(n.next) || (n.op == Op::Branch && bad(n.alt)))
        err("node " + std::to_string(i) + " targets an unknown node");
    }
  }
  return out;
}

Program parse_program(std::string_view text) { return ProgramParser(text).run(); }

Program load_program(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open program file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

namespace {

std::string target_name(const Program& p, std::size_t t) {
  if (t == kHalt) return "halt";
  return p.is_tm() ? p.states[t] : std::to_string(t);
}

std::string reg_name(std::size_t r) { return "r" + std::to_string(r); }

}  // namespace

std::string print_program(const Program& p) {
  std::ostringstream out;
  out << "family " << family_name(p.family) << '\n';
  if (!p.name.empty()) out << "name " << p.name << '\n';
  out << "input " << p.input_arity << '\n';
  if (p.is_tm()) {
    if (p.delta) out << "delta " << p.delta->str() << '\n';
    out << "tapes " << p.tape_count << '\n';
    for (std::size_t h = 0; h < p.heads.size(); ++h) {
      out << "head " << h << " :";
      for (auto t : p.heads[h].tapes) out << ' ' << t;
      out << '\n';
    }
    out << "states";
    for (const auto& s : p.states) out << ' ' << s;
    out << '\n';
    out << "start " << p.states.at(p.start) << '\n';
    std::size_t w = p.width();
    for (std::size_t idx = 0; idx < p.table.size(); ++idx) {
      const auto& r = p.table[idx];
      if (!r) continue;
      out << "rule " << p.states[idx >> w] << ' '
          << observation_text(static_cast<std::uint32_t>(idx & ((std::size_t{1} << w) - 1)), w) << " -> ";
      for (auto b : r->write) out << static_cast<char>('0' + b);
      out << ' ';
      for (auto m : r->move) out << (m == Move::Left ? 'L' : m == Move::Right ? 'R' : 'S');
      out << ' ' << target_name(p, r->next) << '\n';
    }
  } else {
    out << "registers " << p.register_count << '\n';
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      const auto& n = p.nodes[i];
      out << "node " << i << ": " << op_name(n.op);
      switch (n.op) {
        case Op::Const: out << ' ' << reg_name(n.regs[0]) << ' ' << format_rational(n.constant); break;
        case Op::DRead:
        case Op::DMove:
          for (auto r : n.regs) out << ' ' << reg_name(r);
          out << ' ' << n.stride << ' ' << n.offset;
          break;
        case Op::DReset: out << ' ' << reg_name(n.regs[0]) << ' ' << n.stride << ' ' << n.offset; break;
        default:
          for (auto r : n.regs) out << ' ' << reg_name(r);
      }
      if (n.op != Op::Halt) {
        out << " -> " << target_name(p, n.next);
        if (n.op == Op::Branch) out << " | " << target_name(p, n.alt);
      }
      out << '\n';
    }
  }
  for (const auto& [k, v] : p.meta) {
    out << "meta " << k;
    if (!v.empty()) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace transfinite
