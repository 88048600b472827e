#pragma once

// ITTM tapes as StructuredCode registers, and a compiler from single-head
// ITTM programs to liminf IBSSM flow charts.
//
// Cell k of tape t is C_i with i = 3k + t, stored in block H_i: the block's
// 1 sits at h_i(m) and the cell holds m mod 2.  Every write that changes a
// cell moves the 1 one place right, so a cell that keeps changing drains its
// block towards 0 and the register liminf empties it; the repair after each
// limit puts the 1 back at h_i(0).

#include "transfinite/ibssm.hpp"
#include "transfinite/program.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace transfinite {

/// Cell index i -> bit.  Absent cells are 0.
using CellBits = std::map<std::uint64_t, std::uint8_t>;

inline std::uint64_t cell_index(std::size_t tape, std::uint64_t k) { return 3 * k + tape; }

/// StructuredCode with every block at shift 0 except the listed ones; a
/// cell holding 1 without a listed shift gets shift 1.  Throws
/// PreconditionError when a shift's parity contradicts the cell.
BssValue encode_tape(const CellBits& bits, const std::map<std::uint64_t, std::uint64_t>& shifts = {});

/// Cells holding 1.  Empty blocks read 0.  Throws PreconditionError on a
/// rational or a non-conforming code.
CellBits decode_register(const BssValue& v);

/// Finite tapes (base-0 blocks only) to cell bits and back.
CellBits cells_of(const std::vector<Tape>& tapes);
std::vector<Tape> tapes_of(const CellBits& bits, std::size_t tape_count);

/// The one-digit-per-cell encoding: sum of C_i * 10^-(i+1).
Rational naive_encode(const CellBits& bits);

/// Register layout of compiled programs.
namespace reg {
inline constexpr std::size_t code = 0, zero = 1, head_inv = 2, head_frac = 3, state = 4, stepped = 5,
                             started = 6, read0 = 7, one = 10, temp = 11, count = 12;
}

/// Throws PreconditionError unless p is a single-head ITTM program over
/// tapes drawn from 0, 1, 2.  The result carries "meta dispatch N" (the
/// node every simulated step passes), "meta implicit_halt N" and
/// "meta step_bound N" (IBSSM nodes per ITTM step, at most).
Program compile_ittm_to_ibssm(const Program& p);

/// The ITTM configuration a compiled machine's registers stand for.  Head
/// k is read from head_frac = k/(k+1); a value of 1 means the head ran off
/// and sits at 0.
Snapshot decode_compiled(const Snapshot& s, std::size_t tape_count);

/// Initial registers of a compiled program for the given ITTM input.
Snapshot compiled_initial(const Program& compiled, std::string_view bits);

struct BisimReport {
  bool agree = false;
  bool inconclusive = false;
  std::uint64_t checkpoints = 0;
  std::uint64_t limit_checkpoints = 0;
  unsigned max_limit_level = 0;
  std::string divergence;  // first disagreement, when !agree
  RunResult ittm;
  RunResult ibssm;

  std::string str() const;
};

/// Runs the program and its compilation side by side through the stages
/// below w^level, comparing every ITTM stage both sides simulated and
/// every limit, then compares the two runs' outcomes.
BisimReport bisimulate(const Program& p, std::string_view bits, const Budget& b);

}  // namespace transfinite
