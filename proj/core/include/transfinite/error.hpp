#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace transfinite {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An ordinal notation would exceed the configured nesting depth.
class NotationOverflow : public Error {
public:
  using Error::Error;
};

/// Malformed textual input (ordinals, rationals, budgets, maps).
class SyntaxError : public Error {
public:
  using Error::Error;
};

/// A caller broke an operation's precondition (wrong family, arity, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

struct Diagnostic {
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;

  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }
};

/// Program text failed to parse or validate. Carries every diagnostic found.
class ProgramError : public Error {
public:
  explicit ProgramError(std::vector<Diagnostic> diags)
      : Error(join(diags)), diagnostics_(std::move(diags)) {}

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
  static std::string join(const std::vector<Diagnostic>& diags) {
    std::string out;
    for (const auto& d : diags) {
      if (!out.empty()) out += '\n';
      out += d.str();
    }
    return out;
  }

  std::vector<Diagnostic> diagnostics_;
};

}  // namespace transfinite
