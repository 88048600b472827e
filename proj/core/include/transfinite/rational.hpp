#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace transfinite {

using Rational = boost::multiprecision::cpp_rational;

/// Accepts "p/q", "-3", "0.125".  Throws SyntaxError.
Rational parse_rational(std::string_view text);
/// Comma separated list; the empty string is the empty list.
std::vector<Rational> parse_rational_list(std::string_view text);
/// "p/q" in lowest terms, or just "p" when the denominator is 1.
std::string format_rational(const Rational& q);

/// Sum of numerator and denominator bit lengths; a cheap size measure.
std::size_t rational_bits(const Rational& q);

/// Fractional part in [0,1).
Rational frac(const Rational& q);

std::size_t hash_rational(const Rational& q) noexcept;

}  // namespace transfinite
