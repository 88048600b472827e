#pragma once

#include "transfinite/limit_engine.hpp"
#include "transfinite/machines.hpp"

#include <string_view>
#include <vector>

namespace transfinite {

/// Result of one ITTM successor step.  On an implicit halt the snapshot is
/// returned unchanged and `halted` is set.
struct StepOutcome {
  Snapshot snapshot;
  StepStatus status = StepStatus::Continue;
  bool halted() const noexcept { return status == StepStatus::HaltExplicit || status == StepStatus::HaltImplicit; }
};

StepOutcome ittm_step(const Snapshot& s, const Program& p);

/// Input bits as text ("0110"); throws SyntaxError on other characters.
std::vector<CellAddr> parse_bit_input(std::string_view bits);

Snapshot ittm_initial(const Program& p, std::string_view bits);

RunResult ittm_run(const Program& p, std::string_view bits, const Budget& b, const SnapshotObserver& obs = {});

/// Same contract as ittm_run for programs with at least two heads; throws
/// PreconditionError otherwise.
RunResult ittm_multihead_demo(const Program& p, const Budget& b, const SnapshotObserver& obs = {});

}  // namespace transfinite
