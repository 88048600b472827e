#include "transfinite/bss_value.hpp"

#include "transfinite/error.hpp"
#include "transfinite/tape.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace transfinite {

std::uint64_t pair_index(std::uint64_t i, std::uint64_t k) {
  std::uint64_t m = std::max(i, k);
  if (m > 0xffffffffULL) throw PreconditionError("pair index overflow");
  return i < k ? k * k + i : i * i + i + k;
}

std::pair<std::uint64_t, std::uint64_t> unpair_index(std::uint64_t n) {
  auto m = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (m * m > n) --m;
  while ((m + 1) * (m + 1) <= n) ++m;
  std::uint64_t r = n - m * m;
  if (r < m) return {r, m};
  return {m, r - m};
}

// ------------------------------------------------------------ StructuredCode

std::optional<std::uint64_t> StructuredCode::shift(std::uint64_t block) const {
  auto it = blocks.find(block);
  if (it != blocks.end()) return it->second;
  if (default_occupied) return std::uint64_t{0};
  return std::nullopt;
}

void StructuredCode::set_shift(std::uint64_t block, std::optional<std::uint64_t> s) {
  bool is_default = default_occupied ? (s && *s == 0) : !s;
  if (is_default)
    blocks.erase(block);
  else
    blocks[block] = s;
}

std::uint8_t StructuredCode::digit(std::uint64_t pos) const {
  if (auto it = exceptions.find(pos); it != exceptions.end()) return it->second;
  auto [i, k] = unpair_index(pos);
  auto s = shift(i);
  return s && *s == k ? 1 : 0;
}

Rational StructuredCode::to_rational() const {
  if (default_occupied) throw PreconditionError("code has infinite support");
  std::map<std::uint64_t, std::uint8_t> digits;
  for (const auto& [i, s] : blocks)
    if (s) digits[block_position(i, *s)] = 1;
  for (const auto& [p, d] : exceptions) digits[p] = d;
  Rational out = 0;
  for (const auto& [p, d] : digits) {
    if (d == 0) continue;
    BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(p + 1));
    out += Rational(BigInt(d), den);
  }
  return out;
}

StructuredCode StructuredCode::emptied(const std::set<std::uint64_t>& which) const {
  StructuredCode out = *this;
  for (auto i : which) out.set_shift(i, std::nullopt);
  return out;
}

// ------------------------------------------------------------------ digits

namespace {

// Decimal digits of a rational in [0,1), produced one at a time.
class RationalDigits {
public:
  explicit RationalDigits(const Rational& q) : num_(numerator(q)), den_(denominator(q)) {}
  std::uint8_t next() {
    num_ *= 10;
    BigInt d = num_ / den_;
    num_ -= d * den_;
    return static_cast<std::uint8_t>(d.convert_to<unsigned>());
  }
  const BigInt& den() const { return den_; }

private:
  BigInt num_;
  BigInt den_;
};

// Positions at which two codes can first differ, in increasing order.
std::vector<std::uint64_t> candidate_positions(const StructuredCode& a, const StructuredCode& b) {
  std::set<std::uint64_t> listed;
  std::set<std::uint64_t> pos;
  for (const auto* c : {&a, &b}) {
    for (const auto& [i, s] : c->blocks) {
      listed.insert(i);
      if (s) pos.insert(block_position(i, *s));
    }
    for (const auto& [p, d] : c->exceptions) pos.insert(p);
  }
  for (auto i : listed) pos.insert(block_position(i, 0));
  if (a.default_occupied != b.default_occupied) {
    // exceptions can mask at most that many unlisted blocks
    std::size_t want = a.exceptions.size() + b.exceptions.size() + 1;
    for (std::uint64_t j = 0; want > 0; ++j) {
      if (listed.count(j)) continue;
      pos.insert(block_position(j, 0));
      --want;
    }
  }
  return {pos.begin(), pos.end()};
}

int compare_codes(const StructuredCode& a, const StructuredCode& b) {
  for (auto p : candidate_positions(a, b)) {
    auto x = a.digit(p), y = b.digit(p);
    if (x != y) return x < y ? -1 : 1;
  }
  return 0;
}

std::uint64_t explicit_horizon(const StructuredCode& c) {
  std::uint64_t h = 0;
  for (const auto& [i, s] : c.blocks) {
    h = std::max(h, block_position(i, 0) + 1);
    if (s) h = std::max(h, block_position(i, *s) + 1);
  }
  for (const auto& [p, d] : c.exceptions) h = std::max(h, p + 1);
  return h;
}

constexpr std::uint64_t kSearchCap = 4'000'000;

// q in [0,1), c with infinite support (hence irrational): never equal.
int compare_rational_code(const Rational& q, const StructuredCode& c) {
  // Past the explicit horizon and the preperiod of q, q's digits repeat
  // with some period T <= den, while c's ones sit at i*i + i with gaps
  // 2i + 2.  Once a gap exceeds T the periodic tail would have to be all
  // zero, and c has a further 1.  So a difference shows up before the
  // bound below.
  BigInt den = denominator(q);
  std::uint64_t pre = 0;
  BigInt rest = den;
  while (rest % 2 == 0 || rest % 5 == 0) {
    if (rest % 2 == 0) rest /= 2;
    if (rest % 5 == 0) rest /= 5;
    ++pre;
  }
  if (rest > BigInt(kSearchCap)) throw Error("register values incomparable within search bound");
  auto period = rest.convert_to<std::uint64_t>();
  std::uint64_t start = std::max(explicit_horizon(c), pre);
  std::uint64_t i = 0;
  while (i * i + i < start || 2 * i + 2 <= period + 1) ++i;
  std::uint64_t bound = (i + 2) * (i + 2) + (i + 2) + 1;
  if (bound > kSearchCap) throw Error("register values incomparable within search bound");
  RationalDigits qd(q);
  for (std::uint64_t p = 0; p < bound; ++p) {
    auto x = qd.next(), y = c.digit(p);
    if (x != y) return x < y ? -1 : 1;
  }
  throw Error("register values incomparable within search bound");
}

}  // namespace

std::uint8_t BssValue::digit(std::uint64_t p) const {
  if (is_code()) return code().digit(p);
  Rational q = frac(rational());
  RationalDigits d(q);
  std::uint8_t x = 0;
  for (std::uint64_t i = 0; i <= p; ++i) x = d.next();
  return x;
}

int compare_values(const BssValue& a, const BssValue& b) {
  if (a.is_rational() && b.is_rational()) {
    const auto& x = a.rational();
    const auto& y = b.rational();
    return x < y ? -1 : (y < x ? 1 : 0);
  }
  if (a.is_code() && b.is_code()) return compare_codes(a.code(), b.code());
  if (a.is_code()) return -compare_values(b, a);
  const Rational& q = a.rational();
  const StructuredCode& c = b.code();
  if (c.finite_support()) {
    Rational v = c.to_rational();
    return q < v ? -1 : (v < q ? 1 : 0);
  }
  if (q < 0) return -1;
  if (q >= 1) return 1;
  return compare_rational_code(q, c);
}

Rational truncate_digits(const BssValue& v, unsigned n) {
  BigInt scale = boost::multiprecision::pow(BigInt(10), n);
  if (v.is_rational()) {
    Rational x = v.rational() * scale;
    BigInt f = numerator(x) / denominator(x);
    if (x < 0 && Rational(f) != x) f -= 1;
    return Rational(f, scale);
  }
  Rational out = 0;
  Rational w = Rational(1, 10);
  for (unsigned p = 0; p < n; ++p, w /= 10) out += w * v.digit(p);
  return out;
}

// ----------------------------------------------------------- hash and text

std::size_t BssValue::hash() const noexcept {
  if (is_rational()) return hash_rational(rational());
  const auto& c = code();
  std::uint64_t h = mix64(c.default_occupied ? 0x51 : 0x17);
  for (const auto& [i, s] : c.blocks) h ^= mix64(mix64(i) + (s ? *s + 1 : 0));
  for (const auto& [p, d] : c.exceptions) h ^= mix64(mix64(p ^ 0xabcdefULL) + d);
  return static_cast<std::size_t>(h);
}

namespace {

// 0 empty, 1 even shift, 2 odd shift
int block_class(const std::optional<std::uint64_t>& s) { return s ? 1 + static_cast<int>(*s % 2) : 0; }

}  // namespace

std::size_t BssValue::abstract_hash() const noexcept {
  if (is_rational()) return hash();
  const auto& c = code();
  int dflt = c.default_occupied ? 1 : 0;
  std::uint64_t h = mix64(c.default_occupied ? 0x51 : 0x17);
  for (const auto& [i, s] : c.blocks) {
    int k = block_class(s);
    if (k != dflt) h ^= mix64(mix64(i) + static_cast<std::uint64_t>(k));
  }
  if (!c.exceptions.empty()) h = mix64(h + 0x77);
  return static_cast<std::size_t>(h);
}

bool BssValue::abstract_equal(const BssValue& o) const {
  if (is_rational() || o.is_rational()) return *this == o;
  const auto& a = code();
  const auto& b = o.code();
  if (a.default_occupied != b.default_occupied || a.exceptions != b.exceptions) return false;
  std::set<std::uint64_t> keys;
  for (const auto& kv : a.blocks) keys.insert(kv.first);
  for (const auto& kv : b.blocks) keys.insert(kv.first);
  for (auto i : keys)
    if (block_class(a.shift(i)) != block_class(b.shift(i))) return false;
  return true;
}

std::string BssValue::str() const {
  if (is_rational()) return format_rational(rational());
  const auto& c = code();
  std::string out = c.default_occupied ? "@r1" : "@0";
  if (!c.blocks.empty()) {
    out += '[';
    bool first = true;
    for (const auto& [i, s] : c.blocks) {
      if (!first) out += ',';
      first = false;
      out += std::to_string(i) + ':' + (s ? std::to_string(*s) : std::string("_"));
    }
    out += ']';
  }
  for (const auto& [p, d] : c.exceptions) out += '!' + std::to_string(p) + '=' + std::to_string(d);
  return out;
}

namespace {

std::uint64_t parse_u64(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw SyntaxError("bad register value '" + std::string(whole) + "'");
  return v;
}

}  // namespace

BssValue BssValue::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty() || text[0] != '@') return BssValue(parse_rational(text));
  std::string_view whole = text;
  StructuredCode c;
  if (text.substr(0, 3) == "@r1") {
    text.remove_prefix(3);
  } else if (text.substr(0, 2) == "@0") {
    c.default_occupied = false;
    text.remove_prefix(2);
  } else {
    throw SyntaxError("bad register value '" + std::string(whole) + "'");
  }
  if (!text.empty() && text[0] == '[') {
    auto close = text.find(']');
    if (close == std::string_view::npos) throw SyntaxError("bad register value '" + std::string(whole) + "'");
    std::string_view body = text.substr(1, close - 1);
    text.remove_prefix(close + 1);
    while (!body.empty()) {
      auto comma = body.find(',');
      std::string_view item = body.substr(0, comma);
      body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
      auto colon = item.find(':');
      if (colon == std::string_view::npos) throw SyntaxError("bad register value '" + std::string(whole) + "'");
      auto i = parse_u64(item.substr(0, colon), whole);
      auto s = item.substr(colon + 1);
      c.set_shift(i, s == "_" ? std::nullopt : std::optional<std::uint64_t>(parse_u64(s, whole)));
    }
  }
  while (!text.empty()) {
    if (text[0] != '!') throw SyntaxError("bad register value '" + std::string(whole) + "'");
    text.remove_prefix(1);
    auto eq = text.find('=');
    if (eq == std::string_view::npos || eq + 1 >= text.size())
      throw SyntaxError("bad register value '" + std::string(whole) + "'");
    auto p = parse_u64(text.substr(0, eq), whole);
    char d = text[eq + 1];
    if (d < '0' || d > '9') throw SyntaxError("bad register value '" + std::string(whole) + "'");
    text.remove_prefix(eq + 2);
    auto saved = c.exceptions;
    c.exceptions.clear();
    if (c.digit(p) != d - '0') saved[p] = static_cast<std::uint8_t>(d - '0');
    c.exceptions = std::move(saved);
  }
  return BssValue(std::move(c));
}

}  // namespace transfinite
