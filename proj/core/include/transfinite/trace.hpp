#pragma once

// Line-delimited JSON run traces and their replay.
//
// Line 1 is the header:
//   {"kind":"header","format":1,"family":..,"rule":..,"budget":..,"program":..}
// then one record per snapshot the engine reports, fields in this order:
//   {"kind":"snap","role":"initial|successor|limit","time":..,"state":..,
//    "heads":[..], then either "tapes":[[[base,block],..],..] and
//    "registers":[..] (full records) or "cells":[[tape,cell,bit],..] and
//    "regs":[[i,value],..] (changes since the previous record),
//    "evidence":.. (limits only)}
// and a closing {"kind":"result","outcome":..,"time":..,"detail":..}.
//
// A successor record is a diff only when it directly follows the record of
// the previous stage; everything else is written in full.

#include "transfinite/ibssm.hpp"
#include "transfinite/limit_engine.hpp"
#include "transfinite/program.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

namespace transfinite {

class TraceWriter {
public:
  /// `rule` only for register machines.
  TraceWriter(std::ostream& out, const Program& p, const Budget& b, std::optional<LimitRule> rule = std::nullopt);
  ~TraceWriter();
  TraceWriter(const TraceWriter&) = delete;
  TraceWriter& operator=(const TraceWriter&) = delete;

  /// Observer to hand to the engine; valid while the writer lives.
  SnapshotObserver observer();
  void finish(const RunResult& r);
  std::uint64_t records() const noexcept;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ReplayReport {
  bool ok = false;
  std::uint64_t records = 0;
  std::uint64_t successors_checked = 0;  // recomputed by one step
  std::uint64_t limits_checked = 0;      // recomputed by the engine
  std::uint64_t rerun_checked = 0;       // successors after a gap, recomputed by the engine
  std::string failure;                   // first mismatch when !ok

  std::string str() const;
};

/// Rebuilds every snapshot of a trace, recomputes successor stages from
/// the stage before them and limits and stages after gaps by running the
/// engine again, and compares the final result.  Throws SyntaxError on a
/// malformed trace.
ReplayReport replay_trace(std::istream& in);

}  // namespace transfinite
