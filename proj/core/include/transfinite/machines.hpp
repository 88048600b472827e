#pragma once

// Successor steps and level-1 limit resolution for the Turing families
// (ITTM, OTM, delta-ITTM), which differ only in how heads move off limit
// cells and where an unbounded head lands at a limit.

#include "transfinite/limit_engine.hpp"
#include "transfinite/program.hpp"
#include "transfinite/snapshot.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace transfinite {

enum class StepStatus { Continue, HaltExplicit, HaltImplicit, Crash };

/// Cells written by one step, as (tape, cell).
using WriteLog = std::vector<std::pair<std::size_t, CellAddr>>;

/// One transition in place.  HaltImplicit leaves the snapshot untouched;
/// HaltExplicit has applied the halting rule's writes and moves.
StepStatus tm_step(Snapshot& s, const Program& p, WriteLog* log = nullptr);

/// Observation index of the cells under the heads.
std::uint32_t tm_observe(const Snapshot& s, const Program& p);

/// Start configuration: the given cells of tape 0 hold 1.
Snapshot tm_initial(const Program& p, const std::vector<CellAddr>& ones);

/// Where a head whose positions in `base` grow without bound sits at the
/// limit: 0 for ITTMs, base + w for OTMs, and base + w for delta-ITTMs
/// unless that reaches delta, in which case 0.
CellAddr unbounded_head_limit(Family f, const Ordinal& base, const std::optional<Ordinal>& delta);

class TmModel : public MachineModel {
public:
  TmModel(Program p, Snapshot init);

  Snapshot initial() const override { return init_; }
  ApproachResult approach(const Snapshot& start, const Ordinal& limit_time, std::uint64_t steps,
                          const SnapshotObserver* obs) const override;
  const Program& program() const noexcept { return p_; }

private:
  Program p_;
  Snapshot init_;
};

}  // namespace transfinite
