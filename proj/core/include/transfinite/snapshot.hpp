#pragma once

#include "transfinite/bss_value.hpp"
#include "transfinite/ordinal.hpp"
#include "transfinite/tape.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace transfinite {

/// Full machine configuration at an ordinal time.  Turing families use
/// heads and tapes; register machines use `state` as the node index and
/// `registers`.
struct Snapshot {
  Ordinal time;
  std::size_t state = 0;
  std::vector<CellAddr> heads;
  std::vector<Tape> tapes;
  std::vector<BssValue> registers;
  // Register machines: number of times a code register's magnitude was
  // consulted so far.  Bookkeeping only; not part of the configuration.
  std::uint64_t code_reads = 0;

  /// Hash of everything but time and bookkeeping.
  std::uint64_t config_hash() const;
  /// Equal in everything but time and bookkeeping.
  bool same_configuration(const Snapshot& o) const;

  std::string str() const;

  friend bool operator==(const Snapshot& a, const Snapshot& b) {
    return a.time == b.time && a.same_configuration(b);
  }
};

/// Run budget: successor steps per omega-approach, highest limit level the
/// engine commits, and a cap on committed limit snapshots.
struct Budget {
  std::uint64_t steps = 0;
  std::uint64_t level = 0;
  std::uint64_t snaps = 0;

  /// "steps=N,level=K,snaps=M"; keys may appear in any order, all three
  /// required.  Throws SyntaxError.
  static Budget parse(std::string_view text);
  std::string str() const;
  /// Throws PreconditionError unless every field is positive.
  void validate() const;

  friend bool operator==(const Budget&, const Budget&) = default;
};

enum class CycleKind { ExactRepeat, RightDrift };

std::string_view cycle_kind_name(CycleKind k);

/// Certificate that a history is periodic from start_index on.
///
/// ExactRepeat: the configuration at start_index + period equals the one at
/// start_index.  RightDrift: state and non-drifting heads equal, drifting
/// heads and all tape content at offsets >= stable_prefix_length (in the
/// drift base, on the drifting heads' tapes) moved right by
/// shift_per_period; the cells left behind hold wake_values.
struct CycleEvidence {
  CycleKind kind = CycleKind::ExactRepeat;
  unsigned level = 1;
  Ordinal start_time;
  std::uint64_t start_index = 0;
  std::uint64_t period = 1;
  std::uint64_t shift_per_period = 0;
  std::uint64_t stable_prefix_length = 0;
  Ordinal drift_base;
  std::map<std::uint64_t, std::uint8_t> wake_values;  // residue r < shift -> bit
  // register machines: code blocks whose shift grows, per register
  std::map<std::size_t, std::vector<std::uint64_t>> drifting_blocks;

  std::string str() const;
  friend bool operator==(const CycleEvidence&, const CycleEvidence&) = default;
};

enum class Outcome { Halted, Looping, Unresolved, Crashed, ContinuityViolation };

std::string_view outcome_name(Outcome o);

struct RunResult {
  Outcome outcome = Outcome::Unresolved;
  // Halted: halting time.  Looping: the limit found equal to an earlier
  // configuration.  Unresolved: where the budget ran out.  Crashed and
  // ContinuityViolation: the offending stage.
  Ordinal time;
  Snapshot final;
  std::optional<CycleEvidence> evidence;
  std::string detail;
  bool r0_settled = false;
  std::uint64_t limits = 0;

  bool halted() const noexcept { return outcome == Outcome::Halted; }
  std::string str() const;
  friend bool operator==(const RunResult&, const RunResult&) = default;
};

}  // namespace transfinite
