#pragma once

// Ordinal notations in Cantor normal form below epsilon_0.
//
// An ordinal is a finite sum  w^e1*c1 + w^e2*c2 + ... + w^ek*ck  with
// e1 > e2 > ... > ek (each itself an Ordinal) and every ci >= 1.  The empty
// sum is 0.  Values are immutable once built; every constructor normalizes,
// so structural equality is ordinal equality.
//
// Textual syntax (parser and printer are inverse on canonical forms):
//
//   ordinal := term { '+' term }
//   term    := INT | 'w' [ '^' expo ] [ '*' INT ]
//   expo    := INT | 'w' | '(' ordinal ')'
//
// e.g. "0", "w", "w^2*3 + w*2 + 5", "w^(w)".  Non-canonical input such as
// "1 + w" is accepted and normalized (to "w").

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace transfinite {

using BigInt = boost::multiprecision::cpp_int;

struct Term;

class Ordinal {
public:
  static constexpr std::size_t kDefaultMaxDepth = 8;

  Ordinal();
  Ordinal(std::uint64_t n);  // NOLINT: finite ordinals convert implicitly
  explicit Ordinal(const BigInt& n);
  Ordinal(const Ordinal&);
  Ordinal(Ordinal&&) noexcept;
  Ordinal& operator=(const Ordinal&);
  Ordinal& operator=(Ordinal&&) noexcept;
  ~Ordinal();

  /// Builds an ordinal from arbitrary (possibly unsorted) terms by summing
  /// them left to right.
  static Ordinal sum_of(const std::vector<Term>& terms);
  static Ordinal omega();

  const std::vector<Term>& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_finite() const noexcept;
  bool is_limit() const noexcept;
  bool is_successor() const noexcept;

  /// Finite value if the ordinal is finite and fits in 64 bits.
  std::optional<std::uint64_t> to_u64() const;
  /// Coefficient of the w^0 term (0 for limits and zero).
  BigInt finite_part() const;
  /// The ordinal with its finite tail removed; 0 or a limit.
  Ordinal limit_part() const;
  /// Leading exponent; 0 for the zero ordinal.
  Ordinal leading_exponent() const;
  /// Nesting depth of the notation (0 for finite ordinals).
  std::size_t depth() const;

  std::string str() const;
  static Ordinal parse(std::string_view text);

  std::size_t hash() const noexcept;

  friend bool operator==(const Ordinal& a, const Ordinal& b);
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);

private:
  friend Ordinal add(const Ordinal& a, const Ordinal& b);
  friend Ordinal mul(const Ordinal& a, const Ordinal& b);
  friend Ordinal omega_pow(const Ordinal& a, std::size_t max_depth);
  friend Ordinal truncate_below(const Ordinal& a, const Ordinal& e);

  std::vector<Term> terms_;
};

struct Term {
  Ordinal exponent;
  BigInt coefficient;

  friend bool operator==(const Term&, const Term&) = default;
};

enum class Cmp { LT, EQ, GT };
enum class OrdinalKind { Zero, Successor, Limit };

Ordinal add(const Ordinal& a, const Ordinal& b);
Ordinal mul(const Ordinal& a, const Ordinal& b);
/// w^a as a single term.  Throws NotationOverflow past `max_depth`.
Ordinal omega_pow(const Ordinal& a, std::size_t max_depth = Ordinal::kDefaultMaxDepth);
Cmp compare(const Ordinal& a, const Ordinal& b);
OrdinalKind classify(const Ordinal& a);

/// Drops every term whose exponent is below `e`: the largest multiple of
/// w^e that is <= a.
Ordinal truncate_below(const Ordinal& a, const Ordinal& e);

/// Position of (a, b) in the canonical well-order of pairs: by maximum,
/// then lexicographically.  (0,0),(0,1),(1,0),(1,1),(0,2),... -> 0,1,2,3,4
Ordinal godel_pair(const Ordinal& a, const Ordinal& b);

/// Order type of all pairs whose maximum is below m.
Ordinal pairs_below(const Ordinal& m);

/// Necessary-condition check for primitive-recursive closure: godel_pair
/// maps every pair of sampled ordinals below d back below d.  The sample
/// schedule is deterministic; `samples` caps the number of sampled ordinals.
bool is_pairing_closed(const Ordinal& d, std::size_t samples);

/// Deterministic sample of ordinals below d used by is_pairing_closed.
std::vector<Ordinal> pairing_samples(const Ordinal& d, std::size_t samples);

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }
inline Ordinal operator*(const Ordinal& a, const Ordinal& b) { return mul(a, b); }

std::ostream& operator<<(std::ostream& os, const Ordinal& a);

}  // namespace transfinite

template <>
struct std::hash<transfinite::Ordinal> {
  std::size_t operator()(const transfinite::Ordinal& a) const noexcept { return a.hash(); }
};
