#pragma once

// Exact IBSSM register contents.
//
// A register holds either an exact rational or a StructuredCode: a real in
// [0,1) given by its decimal digits, digit position p weighing 10^-(p+1).
// Positions are split into blocks H_i = { pi(i,k) : k in N } by the finite
// max-then-lex pairing pi, and h_i(k) = pi(i,k) enumerates H_i in
// increasing order.  A conforming code has at most one digit 1 per block;
// block i "at shift k" means its 1 sits at h_i(k).  Every block not listed
// explicitly is either at shift 0 (default_occupied) or empty.

#include "transfinite/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace transfinite {

/// pi(i, k): position of (i, k) in the max-then-lex order on N x N.
std::uint64_t pair_index(std::uint64_t i, std::uint64_t k);
std::pair<std::uint64_t, std::uint64_t> unpair_index(std::uint64_t n);
/// h_i(k), the k-th position of block i.
inline std::uint64_t block_position(std::uint64_t i, std::uint64_t k) { return pair_index(i, k); }

struct StructuredCode {
  bool default_occupied = true;
  std::map<std::uint64_t, std::optional<std::uint64_t>> blocks;  // nullopt: empty block
  std::map<std::uint64_t, std::uint8_t> exceptions;              // digit overrides

  /// r(1): every block at shift 0.
  static StructuredCode initial() { return StructuredCode{}; }

  std::optional<std::uint64_t> shift(std::uint64_t block) const;
  void set_shift(std::uint64_t block, std::optional<std::uint64_t> s);
  std::uint8_t digit(std::uint64_t pos) const;
  bool conforming() const noexcept { return exceptions.empty(); }
  /// Finitely many nonzero digits.
  bool finite_support() const noexcept { return !default_occupied; }
  /// Exact value; only for codes with finite support.
  Rational to_rational() const;

  /// Copy with the given blocks emptied.
  StructuredCode emptied(const std::set<std::uint64_t>& which) const;

  friend bool operator==(const StructuredCode&, const StructuredCode&) = default;
};

class BssValue {
public:
  BssValue() : v_(Rational(0)) {}
  BssValue(Rational q) : v_(std::move(q)) {}  // NOLINT
  BssValue(StructuredCode c) : v_(std::move(c)) {}  // NOLINT
  BssValue(long n) : v_(Rational(n)) {}  // NOLINT

  bool is_rational() const noexcept { return std::holds_alternative<Rational>(v_); }
  bool is_code() const noexcept { return !is_rational(); }
  const Rational& rational() const { return std::get<Rational>(v_); }
  const StructuredCode& code() const { return std::get<StructuredCode>(v_); }
  StructuredCode& code() { return std::get<StructuredCode>(v_); }

  /// Decimal digit at position p (p = 0 is the first digit after the point);
  /// only meaningful for values in [0,1).
  std::uint8_t digit(std::uint64_t p) const;

  std::size_t hash() const noexcept;
  /// Hash that sees a code only through block occupancy and shift parity.
  std::size_t abstract_hash() const noexcept;
  bool abstract_equal(const BssValue& o) const;

  /// Rationals as "p/q"; codes as "@r1", "@0", optionally followed by
  /// "[block:shift,block:_]" and "!pos=digit" overrides.
  std::string str() const;
  static BssValue parse(std::string_view text);

  friend bool operator==(const BssValue&, const BssValue&) = default;

private:
  std::variant<Rational, StructuredCode> v_;
};

/// Exact order on register values: -1, 0, 1.  Throws Error if a
/// rational/code comparison is not settled within the proven search bound.
int compare_values(const BssValue& a, const BssValue& b);

inline bool value_less(const BssValue& a, const BssValue& b) { return compare_values(a, b) < 0; }

/// The first n digits of v as the rational floor(v * 10^n) / 10^n, for v
/// in [0,1).
Rational truncate_digits(const BssValue& v, unsigned n);

}  // namespace transfinite
