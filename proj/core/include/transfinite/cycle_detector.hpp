#pragma once

// Periodicity certificates over explicit snapshot histories, the limit they
// license, and a direct-scan oracle to check that limit against.

#include "transfinite/program.hpp"
#include "transfinite/snapshot.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace transfinite {

/// How a family takes limits: where unbounded heads go, and the time the
/// limit snapshot carries.
struct LimitRuleSet {
  Family family = Family::ITTM;
  std::optional<Ordinal> delta;
  Ordinal limit_time = Ordinal::omega();

  static LimitRuleSet of(const Program& p, Ordinal limit_time);
};

/// A right drift between two snapshots: drifting heads share a base and
/// all moved d > 0 to the right, everything at offsets >= L on their tapes
/// (in that base) moved with them, everything else is unchanged.
struct DriftMatch {
  std::uint64_t d = 0;
  std::uint64_t L = 0;
  Ordinal base;
  std::vector<bool> heads;
  std::vector<bool> tapes;
};

/// `lo`/`hi` are each head's least and greatest offset over the stages
/// from a to b, all in the head's base at a.  L is the least offset a
/// drifting head visited; it must be positive, and no other head may read
/// the drift region.
std::optional<DriftMatch> match_drift(const Snapshot& a, const Snapshot& b, const std::vector<HeadSpec>& heads,
                                      const std::vector<std::uint64_t>& lo, const std::vector<std::uint64_t>& hi);

/// Least-start, least-period certificate among starts and periods whose
/// end lies within the first `window` entries; an exact repeat anywhere
/// beats every drift.
std::optional<CycleEvidence> detect_cycle(const std::vector<Snapshot>& history, std::size_t window,
                                          const std::vector<HeadSpec>& heads);

/// Limit of the history continued forever along `ev`.  Needs the stages
/// start_index .. start_index + period.  Throws PreconditionError when the
/// rule set does not fit the history.
Snapshot resolve_limit(const std::vector<Snapshot>& history, const CycleEvidence& ev,
                       const std::vector<HeadSpec>& heads, const LimitRuleSet& rules);

struct OracleLimit {
  Snapshot snapshot;
  // Per tape: cells at or past this address in the same base were still
  // being overtaken at the end of the history and are not determined.
  std::map<std::size_t, CellAddr> horizon;
};

/// Per-cell, per-head and state liminfs read off the final `period`
/// entries of the history, which must end with two full periods in which
/// every non-escaping quantity repeats.  A head whose position grew over
/// the last period is taken to escape.  Throws PreconditionError if the
/// history is too short or not periodic at its end.
OracleLimit brute_liminf_oracle(const std::vector<Snapshot>& history, std::size_t period,
                                const std::vector<HeadSpec>& heads, const LimitRuleSet& rules);

}  // namespace transfinite
