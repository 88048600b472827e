#pragma once

#include "transfinite/transfinite.hpp"

#include <set>
#include <string>
#include <vector>

namespace testkit {

inline std::string corpus(const std::string& name) { return std::string(TRANSFINITE_PROGRAMS_DIR) + "/" + name; }

inline transfinite::Program load(const std::string& name) { return transfinite::load_program(corpus(name)); }

/// Successor steps only, straight from tm_step: the snapshots at times
/// 0 .. n (fewer if the machine halts).
inline std::vector<transfinite::Snapshot> successor_history(const transfinite::Program& p,
                                                            const transfinite::Snapshot& start, std::size_t n) {
  std::vector<transfinite::Snapshot> h{start};
  for (std::size_t i = 0; i < n; ++i) {
    transfinite::Snapshot s = h.back();
    auto st = transfinite::tm_step(s, p);
    if (st != transfinite::StepStatus::Continue) break;
    h.push_back(std::move(s));
  }
  return h;
}

/// First difference between a resolved limit and the oracle's, looking at
/// tape cells only below the oracle's horizon; empty when they agree.
inline std::string limit_mismatch(const transfinite::Snapshot& got, const transfinite::OracleLimit& want) {
  using namespace transfinite;
  const Snapshot& w = want.snapshot;
  if (got.time != w.time) return "time " + got.time.str() + " vs " + w.time.str();
  if (got.state != w.state) return "state " + std::to_string(got.state) + " vs " + std::to_string(w.state);
  if (got.heads != w.heads) return "heads differ";
  if (got.tapes.size() != w.tapes.size()) return "tape count differs";
  static const BitBlock kEmpty;
  for (std::size_t t = 0; t < w.tapes.size(); ++t) {
    std::set<Ordinal> bases;
    for (const auto& [b, _] : got.tapes[t].blocks()) bases.insert(b);
    for (const auto& [b, _] : w.tapes[t].blocks()) bases.insert(b);
    auto hz = want.horizon.find(t);
    for (const auto& base : bases) {
      if (hz != want.horizon.end() && hz->second.base < base) continue;
      const BitBlock* a = got.tapes[t].block(base);
      const BitBlock* b = w.tapes[t].block(base);
      const BitBlock& x = a ? *a : kEmpty;
      const BitBlock& y = b ? *b : kEmpty;
      std::uint64_t upto = BitBlock::compare_horizon(x, y);
      if (hz != want.horizon.end() && hz->second.base == base) upto = std::min(upto, hz->second.offset);
      for (std::uint64_t c = 0; c < upto; ++c)
        if (x.get(c) != y.get(c)) return "tape " + std::to_string(t) + " cell " + CellAddr(base, c).str();
    }
  }
  return {};
}

inline transfinite::Budget budget(std::uint64_t steps = 10000, std::uint64_t level = 2, std::uint64_t snaps = 200) {
  return transfinite::Budget{steps, level, snaps};
}

}  // namespace testkit
