#include "transfinite/enumerate.hpp"

#include <limits>
#include <string>

namespace transfinite {

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSat / a) return kSat;
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSat - b ? kSat : a + b; }

std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

std::uint64_t pow3(std::size_t h) { return sat_pow(3, h); }

// Options for one table cell / one node at size n.
std::uint64_t options(const Schema& s, std::size_t n) {
  if (s.family == Family::IBSSM) {
    std::uint64_t t = n + 1;
    return 1 + 40 * t + 4 * t * t;
  }
  return 1 + sat_mul(sat_mul(std::uint64_t{1} << s.head_count, pow3(s.head_count)), n + 1);
}

std::uint64_t cells(const Schema& s, std::size_t n) {
  if (s.family == Family::IBSSM) return n;
  return static_cast<std::uint64_t>(n) << s.head_count;
}

std::uint64_t size_at(const Schema& s, std::size_t n) { return sat_pow(options(s, n), cells(s, n)); }

std::string index_prefix(const Schema& s) { return "enum_" + std::string(family_name(s.family)) + "_"; }

Program tm_program(const Schema& s, std::size_t n, const std::vector<std::uint64_t>& digits) {
  Program p;
  p.family = s.family;
  p.tape_count = 3;
  p.heads.assign(s.head_count, HeadSpec{{1}});
  for (std::size_t i = 0; i < n; ++i) p.states.push_back("q" + std::to_string(i));
  p.start = 0;
  if (s.family == Family::Delta) p.delta = s.delta;
  std::size_t w = s.head_count;
  std::uint64_t m3 = pow3(s.head_count);
  p.table.assign(n << w, std::nullopt);
  for (std::size_t c = 0; c < digits.size(); ++c) {
    std::uint64_t o = digits[c];
    if (o == 0) continue;
    std::uint64_t v = o - 1;
    TmRule r;
    std::uint64_t target = v % (n + 1);
    v /= (n + 1);
    std::uint64_t move = v % m3;
    std::uint64_t write = v / m3;
    r.next = target == n ? kHalt : static_cast<std::size_t>(target);
    for (std::size_t i = 0; i < w; ++i) r.write.push_back(static_cast<std::uint8_t>((write >> (w - 1 - i)) & 1U));
    std::uint64_t div = m3;
    for (std::size_t i = 0; i < s.head_count; ++i) {
      div /= 3;
      auto d = (move / div) % 3;
      r.move.push_back(d == 0 ? Move::Left : d == 1 ? Move::Right : Move::Stay);
    }
    p.table[c] = std::move(r);
  }
  return p;
}

BssNode ibssm_node(std::size_t n, std::uint64_t o) {
  std::uint64_t t = n + 1;
  auto tgt = [&](std::uint64_t x) { return x == n ? kHalt : static_cast<std::size_t>(x); };
  BssNode node;
  if (o == 0) {
    node.op = Op::Halt;
    return node;
  }
  std::uint64_t v = o - 1;
  if (v < 4 * t) {
    node.op = Op::Const;
    node.next = tgt(v % t);
    v /= t;
    node.constant = Rational(static_cast<long>(v % 2));
    node.regs = {static_cast<std::size_t>(v / 2)};
    return node;
  }
  v -= 4 * t;
  if (v < 4 * t) {
    node.op = Op::Copy;
    node.next = tgt(v % t);
    v /= t;
    node.regs = {static_cast<std::size_t>(v / 2), static_cast<std::size_t>(v % 2)};
    return node;
  }
  v -= 4 * t;
  if (v < 32 * t) {
    static const Op arith[] = {Op::Add, Op::Sub, Op::Mul, Op::Div};
    node.next = tgt(v % t);
    v /= t;
    node.op = arith[v / 8];
    v %= 8;
    node.regs = {static_cast<std::size_t>(v / 4), static_cast<std::size_t>((v / 2) % 2),
                 static_cast<std::size_t>(v % 2)};
    return node;
  }
  v -= 32 * t;
  node.op = Op::Branch;
  node.alt = tgt(v % t);
  v /= t;
  node.next = tgt(v % t);
  v /= t;
  node.regs = {static_cast<std::size_t>(v / 2), static_cast<std::size_t>(v % 2)};
  return node;
}

}  // namespace

std::uint64_t schema_size(const Schema& s) {
  std::uint64_t total = 0;
  for (std::size_t n = 1; n <= s.max_states; ++n) total = sat_add(total, size_at(s, n));
  return total;
}

std::optional<Program> program_at(const Schema& s, std::uint64_t e) {
  if (s.family == Family::Delta && !s.delta) throw PreconditionError("delta schema needs a delta");
  if (s.family != Family::IBSSM && (s.head_count == 0 || s.head_count > 8))
    throw PreconditionError("schema head count must be in 1..8");
  std::uint64_t local = e;
  std::size_t n = 1;
  for (; n <= s.max_states; ++n) {
    std::uint64_t sz = size_at(s, n);
    if (local < sz) break;
    local -= sz;
  }
  if (n > s.max_states) throw PreconditionError("enumeration index out of range");
  std::uint64_t base = options(s, n);
  std::vector<std::uint64_t> digits(cells(s, n), 0);
  for (std::size_t i = digits.size(); i-- > 0;) {
    digits[i] = local % base;
    local /= base;
  }
  Program p;
  if (s.family == Family::IBSSM) {
    p.family = Family::IBSSM;
    p.register_count = 2;
    for (auto d : digits) p.nodes.push_back(ibssm_node(n, d));
  } else {
    p = tm_program(s, n, digits);
  }
  p.name = index_prefix(s) + std::to_string(e);
  if (!validate_program(p).empty()) return std::nullopt;
  return p;
}

std::vector<Program> enumerate_programs(const Schema& s, std::uint64_t bound) {
  std::vector<Program> out;
  std::uint64_t total = schema_size(s);
  for (std::uint64_t e = 0; e < bound && e < total; ++e)
    if (auto p = program_at(s, e)) out.push_back(std::move(*p));
  return out;
}

std::optional<std::uint64_t> enumeration_index(const Program& p) {
  std::string prefix = "enum_" + std::string(family_name(p.family)) + "_";
  if (p.name.rfind(prefix, 0) != 0) return std::nullopt;
  try {
    return std::stoull(p.name.substr(prefix.size()));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace transfinite
