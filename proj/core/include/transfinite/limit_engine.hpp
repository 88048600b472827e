#pragma once

// Hierarchical limit resolution.
//
// A level-1 segment runs successor steps from a limit (or the start) until
// its history is certified periodic, then computes the configuration at the
// next limit.  A level-k segment runs level-(k-1) segments until two of
// their start configurations repeat; since the machine is deterministic the
// segments between them repeat forever, and the level-k limit takes, for
// every cell, state, head and register, the minimum over what those
// segments ever held.  Segment summaries carry exactly those minima.

#include "transfinite/bss_value.hpp"
#include "transfinite/program.hpp"
#include "transfinite/snapshot.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace transfinite {

enum class SnapshotRole { Initial, Successor, Limit };

/// Sees the initial snapshot, every successor snapshot the engine actually
/// simulates on its first pass through a segment, and every committed
/// limit.  Times are strictly increasing.
using SnapshotObserver = std::function<void(const Snapshot&, SnapshotRole, const CycleEvidence*)>;

/// Every value a register took over a segment, as far as liminfs can tell:
/// the least rational, and the distinct codes.
class ValueSummary {
public:
  void add(const BssValue& v);
  void merge(const ValueSummary& o);
  /// Least value once the given blocks are emptied in every code.
  BssValue min_under(const std::set<std::uint64_t>& emptied) const;
  const std::optional<Rational>& rational_min() const noexcept { return rational_min_; }
  const std::vector<StructuredCode>& codes() const noexcept { return codes_; }
  bool empty() const noexcept { return !rational_min_ && codes_.empty(); }

private:
  void add_code(const StructuredCode& c);
  std::optional<Rational> rational_min_;
  std::vector<StructuredCode> codes_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> index_;
};

/// Minima over every stage of one segment.
struct Summary {
  std::size_t state = 0;
  std::vector<CellAddr> heads;
  std::vector<Tape> tapes;
  std::vector<ValueSummary> registers;
  std::vector<bool> constant;     // register held one value throughout
  std::vector<BssValue> first;    // register values at the segment start

  /// Summary of a single configuration.
  static Summary of(const Snapshot& s);
  void absorb(const Summary& o);
  void absorb(const Snapshot& s);
};

struct ApproachResult {
  enum class Kind { Limit, Halted, Crashed, Violation, Unresolved };
  Kind kind = Kind::Unresolved;
  // Limit: the configuration at the limit.  Halted: the halting
  // configuration.  Otherwise the stage where the run stopped.
  Snapshot snapshot;
  Summary summary;
  CycleEvidence evidence;
  bool looping = false;   // the limit equals a configuration on the cycle
  bool r0_settled = false;
  std::string detail;
};

/// One machine family as the engine sees it.
class MachineModel {
public:
  virtual ~MachineModel() = default;
  virtual Snapshot initial() const = 0;
  /// Level-1 segment from `start`, whose limit (if reached) is at
  /// `limit_time`.  At most `steps` successor steps on the first pass.
  virtual ApproachResult approach(const Snapshot& start, const Ordinal& limit_time, std::uint64_t steps,
                                  const SnapshotObserver* obs) const = 0;
  /// Registers must converge at limits instead of taking liminfs.
  virtual bool continuity() const { return false; }
};

/// Least limit beyond every stage of the level-`level` segment containing t0.
Ordinal advance_time(const Ordinal& t0, unsigned level);
Ordinal advance_time(const Ordinal& t0, const CycleEvidence& ev, unsigned level);

/// Runs the machine through stages below w^(level+1).  Looping is reported
/// when a computed limit equals the configuration its cycle started from.
RunResult run_machine(const MachineModel& m, const Budget& b, const SnapshotObserver& obs = {});

struct UntilResult {
  bool reached = false;
  Snapshot snapshot;  // the configuration at alpha when reached
  RunResult stop;     // why alpha was not reached otherwise
};

/// Configuration at exactly alpha: for each Cantor normal form term
/// w^e * c, c segments of level e.
UntilResult run_until(const MachineModel& m, const Ordinal& alpha, const Budget& b,
                      const SnapshotObserver& obs = {});

}  // namespace transfinite
