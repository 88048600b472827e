#pragma once

#include "transfinite/ittm.hpp"

#include <string_view>
#include <vector>

namespace transfinite {

StepOutcome otm_step(const Snapshot& s, const Program& p);

/// Marked cells as a comma-separated ordinal list ("w, w*2+1").
std::vector<CellAddr> parse_marks(std::string_view text);

RunResult otm_run(const Program& p, const std::vector<Ordinal>& marks, const Budget& b,
                  const SnapshotObserver& obs = {});

}  // namespace transfinite
