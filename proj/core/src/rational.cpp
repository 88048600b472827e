#include "transfinite/rational.hpp"

#include "transfinite/error.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cctype>
#include <limits>

namespace transfinite {

namespace {

using boost::multiprecision::cpp_int;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational out;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = trim(s.substr(0, slash));
    auto den = trim(s.substr(slash + 1));
    if (!all_digits(num) || !all_digits(den))
      throw SyntaxError("malformed rational '" + std::string(text) + "'");
    cpp_int d(std::string{den});
    if (d == 0) throw SyntaxError("zero denominator in '" + std::string(text) + "'");
    out = Rational(cpp_int(std::string{num}), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto ip = s.substr(0, dot);
    auto fp = s.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) ||
        (ip.empty() && fp.empty()))
      throw SyntaxError("malformed rational '" + std::string(text) + "'");
    cpp_int scale = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(fp.size()));
    cpp_int whole = ip.empty() ? cpp_int(0) : cpp_int(std::string{ip});
    cpp_int frac_part = fp.empty() ? cpp_int(0) : cpp_int(std::string{fp});
    out = Rational(whole * scale + frac_part, scale);
  } else {
    if (!all_digits(s)) throw SyntaxError("malformed rational '" + std::string(text) + "'");
    out = Rational(cpp_int(std::string{s}));
  }
  return neg ? Rational(-out) : out;
}

std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  for (;;) {
    auto comma = text.find(',', start);
    out.push_back(parse_rational(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_rational(const Rational& q) {
  auto num = boost::multiprecision::numerator(q);
  auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::size_t rational_bits(const Rational& q) {
  cpp_int num = boost::multiprecision::abs(boost::multiprecision::numerator(q));
  cpp_int den = boost::multiprecision::denominator(q);
  std::size_t bits = num == 0 ? 0 : boost::multiprecision::msb(num) + 1;
  return bits + boost::multiprecision::msb(den) + 1;
}

Rational frac(const Rational& q) {
  cpp_int num = boost::multiprecision::numerator(q);
  cpp_int den = boost::multiprecision::denominator(q);
  cpp_int r = num % den;
  if (r < 0) r += den;
  return Rational(r, den);
}

std::size_t hash_rational(const Rational& q) noexcept {
  static const cpp_int mask(std::numeric_limits<std::uint64_t>::max());
  cpp_int num = boost::multiprecision::numerator(q);
  bool neg = num < 0;
  if (neg) num = -num;
  auto n = static_cast<std::uint64_t>(cpp_int(num & mask).convert_to<std::uint64_t>());
  auto d = static_cast<std::uint64_t>(
      cpp_int(boost::multiprecision::denominator(q) & mask).convert_to<std::uint64_t>());
  std::size_t h = std::hash<std::uint64_t>{}(n) * 0x9e3779b97f4a7c15ULL;
  h ^= std::hash<std::uint64_t>{}(d) + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
  return neg ? ~h : h;
}

}  // namespace transfinite
