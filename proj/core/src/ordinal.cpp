#include "transfinite/ordinal.hpp"

#include "transfinite/error.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <ostream>
#include <set>

namespace transfinite {

Ordinal::Ordinal() = default;
Ordinal::Ordinal(const Ordinal&) = default;
Ordinal::Ordinal(Ordinal&&) noexcept = default;
Ordinal& Ordinal::operator=(const Ordinal&) = default;
Ordinal& Ordinal::operator=(Ordinal&&) noexcept = default;
Ordinal::~Ordinal() = default;

Ordinal::Ordinal(std::uint64_t n) {
  if (n != 0) terms_.push_back(Term{Ordinal(), BigInt(n)});
}

Ordinal::Ordinal(const BigInt& n) {
  if (n < 0) throw PreconditionError("negative integer is not an ordinal");
  if (n != 0) terms_.push_back(Term{Ordinal(), n});
}

Ordinal Ordinal::omega() { return omega_pow(Ordinal(1)); }

Ordinal Ordinal::sum_of(const std::vector<Term>& terms) {
  Ordinal out;
  for (const auto& t : terms) {
    if (t.coefficient < 0) throw PreconditionError("negative coefficient");
    if (t.coefficient == 0) continue;
    Ordinal single;
    single.terms_.push_back(t);
    out = add(out, single);
  }
  return out;
}

bool Ordinal::is_finite() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

bool Ordinal::is_limit() const noexcept {
  return !terms_.empty() && !terms_.back().exponent.is_zero();
}

bool Ordinal::is_successor() const noexcept {
  return !terms_.empty() && terms_.back().exponent.is_zero();
}

std::optional<std::uint64_t> Ordinal::to_u64() const {
  if (terms_.empty()) return 0;
  if (!is_finite()) return std::nullopt;
  const BigInt& c = terms_[0].coefficient;
  if (c > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return c.convert_to<std::uint64_t>();
}

BigInt Ordinal::finite_part() const {
  if (is_successor()) return terms_.back().coefficient;
  return 0;
}

Ordinal Ordinal::limit_part() const {
  Ordinal out = *this;
  if (out.is_successor()) out.terms_.pop_back();
  return out;
}

Ordinal Ordinal::leading_exponent() const {
  if (terms_.empty()) return Ordinal();
  return terms_.front().exponent;
}

std::size_t Ordinal::depth() const {
  std::size_t d = 0;
  for (const auto& t : terms_) {
    if (t.exponent.is_zero()) continue;
    d = std::max(d, 1 + t.exponent.depth());
  }
  return d;
}

std::size_t Ordinal::hash() const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL ^ terms_.size();
  for (const auto& t : terms_) {
    std::uint64_t low =
        static_cast<std::uint64_t>((t.coefficient & BigInt(std::numeric_limits<std::uint64_t>::max()))
                                       .convert_to<std::uint64_t>());
    h ^= t.exponent.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::uint64_t>{}(low) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

Cmp compare(const Ordinal& a, const Ordinal& b) {
  const auto& x = a.terms();
  const auto& y = b.terms();
  std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    Cmp c = compare(x[i].exponent, y[i].exponent);
    if (c != Cmp::EQ) return c;
    if (x[i].coefficient != y[i].coefficient)
      return x[i].coefficient < y[i].coefficient ? Cmp::LT : Cmp::GT;
  }
  if (x.size() == y.size()) return Cmp::EQ;
  return x.size() < y.size() ? Cmp::LT : Cmp::GT;
}

bool operator==(const Ordinal& a, const Ordinal& b) { return a.terms_ == b.terms_; }

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  switch (compare(a, b)) {
    case Cmp::LT: return std::strong_ordering::less;
    case Cmp::GT: return std::strong_ordering::greater;
    default: return std::strong_ordering::equal;
  }
}

OrdinalKind classify(const Ordinal& a) {
  if (a.is_zero()) return OrdinalKind::Zero;
  return a.is_successor() ? OrdinalKind::Successor : OrdinalKind::Limit;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const Ordinal& e = b.terms_.front().exponent;
  Ordinal out;
  for (const auto& t : a.terms_) {
    Cmp c = compare(t.exponent, e);
    if (c == Cmp::GT) {
      out.terms_.push_back(t);
    } else if (c == Cmp::EQ) {
      out.terms_.push_back(Term{e, t.coefficient + b.terms_.front().coefficient});
      out.terms_.insert(out.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
      return out;
    } else {
      break;
    }
  }
  out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
  return out;
}

Ordinal mul(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal();
  const Ordinal& lead = a.terms_.front().exponent;
  Ordinal out;
  for (const auto& t : b.terms_) {
    Ordinal piece;
    if (t.exponent.is_zero()) {
      piece = a;
      piece.terms_.front().coefficient *= t.coefficient;
    } else {
      piece.terms_.push_back(Term{add(lead, t.exponent), t.coefficient});
    }
    out = add(out, piece);
  }
  return out;
}

Ordinal omega_pow(const Ordinal& a, std::size_t max_depth) {
  if (a.is_zero()) return Ordinal(1);
  if (a.depth() + 1 > max_depth)
    throw NotationOverflow("ordinal notation depth exceeds " + std::to_string(max_depth));
  Ordinal out;
  out.terms_.push_back(Term{a, BigInt(1)});
  return out;
}

Ordinal truncate_below(const Ordinal& a, const Ordinal& e) {
  Ordinal out;
  for (const auto& t : a.terms_) {
    if (compare(t.exponent, e) == Cmp::LT) break;
    out.terms_.push_back(t);
  }
  return out;
}

namespace {

Ordinal single(const Ordinal& e, const BigInt& c) {
  return Ordinal::sum_of({Term{e, c}});
}

// Pairs below w^e for a single pure power.
Ordinal pairs_below_power(const Ordinal& e) {
  if (e == Ordinal(1)) return Ordinal::omega();
  if (e.is_successor()) {
    // e = e' + 1 with e' >= 1
    Ordinal prev = Ordinal::sum_of([&] {
      auto ts = e.terms();
      ts.back().coefficient -= 1;
      return ts;
    }());
    return omega_pow(add(mul(prev, Ordinal(2)), Ordinal(1)));
  }
  // e limit: split off one copy of its last term w^g
  auto ts = e.terms();
  Ordinal g = ts.back().exponent;
  ts.back().coefficient -= 1;
  Ordinal e0 = Ordinal::sum_of(ts);
  return omega_pow(add(mul(e0, Ordinal(2)), omega_pow(g)));
}

}  // namespace

Ordinal pairs_below(const Ordinal& m) {
  Ordinal s;
  Ordinal prefix;
  for (const auto& t : m.terms()) {
    if (t.exponent.is_zero()) {
      const BigInt& c = t.coefficient;
      if (prefix.is_zero()) {
        s = Ordinal(BigInt(c * c));
      } else {
        s = add(s, add(mul(prefix, Ordinal(BigInt(2 * c))), Ordinal(c)));
      }
    } else if (prefix.is_zero()) {
      s = add(pairs_below_power(t.exponent),
              mul(omega_pow(add(t.exponent, t.exponent)), Ordinal(BigInt(t.coefficient - 1))));
    } else {
      s = add(s, single(add(prefix.leading_exponent(), t.exponent), t.coefficient));
    }
    prefix = add(prefix, single(t.exponent, t.coefficient));
  }
  return s;
}

Ordinal godel_pair(const Ordinal& a, const Ordinal& b) {
  if (a < b) return add(pairs_below(b), a);
  return add(add(pairs_below(a), a), b);
}

namespace {

void collect_pool(std::set<Ordinal>& out) {
  std::vector<Ordinal> exps;
  for (std::uint64_t n = 1; n <= 3; ++n) exps.emplace_back(n);
  // second layer: exponents that are themselves infinite
  std::vector<Ordinal> layer2 = exps;
  for (const auto& e : exps) {
    layer2.push_back(omega_pow(e));
    layer2.push_back(add(omega_pow(e), Ordinal(1)));
    layer2.push_back(mul(omega_pow(e), Ordinal(2)));
  }
  std::sort(layer2.begin(), layer2.end());
  layer2.erase(std::unique(layer2.begin(), layer2.end()), layer2.end());

  for (std::uint64_t n = 0; n <= 5; ++n) out.insert(Ordinal(n));
  const std::uint64_t coeffs[] = {1, 2, 3};
  for (const auto& e : layer2) {
    for (auto c : coeffs) {
      Ordinal head = single(e, c);
      out.insert(head);
      for (auto c2 : coeffs) out.insert(add(head, Ordinal(c2)));
      for (const auto& f : layer2) {
        if (!(f < e)) continue;
        for (auto c2 : coeffs) out.insert(add(head, single(f, c2)));
      }
    }
  }
}

}  // namespace

std::vector<Ordinal> pairing_samples(const Ordinal& d, std::size_t samples) {
  static const std::vector<Ordinal> pool = [] {
    std::set<Ordinal> s;
    collect_pool(s);
    return std::vector<Ordinal>(s.begin(), s.end());
  }();
  std::vector<Ordinal> below;
  for (const auto& o : pool)
    if (o < d) below.push_back(o);
  if (samples == 0 || below.size() <= samples) return below;
  std::vector<Ordinal> out;
  out.reserve(samples);
  if (samples == 1) return {below.back()};
  std::size_t last = below.size() - 1;
  std::size_t prev = static_cast<std::size_t>(-1);
  for (std::size_t i = 0; i < samples; ++i) {
    std::size_t idx = i * last / (samples - 1);
    if (idx != prev) out.push_back(below[idx]);
    prev = idx;
  }
  return out;
}

bool is_pairing_closed(const Ordinal& d, std::size_t samples) {
  if (d.is_zero()) throw PreconditionError("is_pairing_closed needs d > 0");
  auto pts = pairing_samples(d, samples);
  for (const auto& a : pts)
    for (const auto& b : pts)
      if (!(godel_pair(a, b) < d)) return false;
  return true;
}

// ---------------------------------------------------------------- text

std::string Ordinal::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += " + ";
    std::string c = t.coefficient.str();
    if (t.exponent.is_zero()) {
      out += c;
      continue;
    }
    out += "w";
    if (t.exponent != Ordinal(1)) {
      if (t.exponent.is_finite())
        out += "^" + t.exponent.str();
      else
        out += "^(" + t.exponent.str() + ")";
    }
    if (t.coefficient != 1) out += "*" + c;
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Ordinal& a) { return os << a.str(); }

namespace {

class OrdinalParser {
public:
  explicit OrdinalParser(std::string_view s) : s_(s) {}

  Ordinal parse_all() {
    Ordinal o = ordinal();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return o;
  }

private:
  Ordinal ordinal() {
    Ordinal acc = term();
    for (;;) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == '+') {
        ++pos_;
        acc = add(acc, term());
      } else {
        return acc;
      }
    }
  }

  Ordinal term() {
    skip();
    if (pos_ >= s_.size()) fail("expected a term");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return Ordinal(integer());
    if (c != 'w') fail("expected 'w' or an integer");
    ++pos_;
    Ordinal expo(1);
    skip();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(') {
        ++pos_;
        expo = ordinal();
        skip();
        if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
        ++pos_;
      } else if (pos_ < s_.size() && s_[pos_] == 'w') {
        ++pos_;
        expo = Ordinal::omega();
      } else {
        expo = Ordinal(integer());
      }
    }
    Ordinal base = omega_pow(expo);
    skip();
    if (pos_ < s_.size() && s_[pos_] == '*') {
      ++pos_;
      skip();
      base = mul(base, Ordinal(integer()));
    }
    return base;
  }

  BigInt integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return BigInt(std::string(s_.substr(start, pos_ - start)));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError("ordinal at column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Ordinal Ordinal::parse(std::string_view text) { return OrdinalParser(text).parse_all(); }

}  // namespace transfinite
