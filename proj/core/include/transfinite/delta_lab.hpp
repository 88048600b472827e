#pragma once

// Turing machines with tapes of length delta, the parameterless class, and
// tooling around reachability of cells.
//
// Slices: slice S_b is the set of cells godel_pair(b, g) for g < delta.  On
// finite indices that is pair_index(b, g), so a b-string of 1s in S_b
// occupies cells b*b + b + g for g < b.
//
// Codes: an output tape codes a reflexive linear order R on naturals when
// cell pair_index(i, j) holds 1 exactly for i R j.  Only finite codes fit on
// a sparse tape, so the ordinals coded here are finite.

#include "transfinite/bss_value.hpp"
#include "transfinite/enumerate.hpp"
#include "transfinite/limit_engine.hpp"
#include "transfinite/machines.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace transfinite {

struct DeltaMachine {
  Ordinal delta;
  bool parameters_allowed = false;

  /// Throws PreconditionError unless delta is a limit passing the pairing
  /// closure check.
  explicit DeltaMachine(Ordinal d, bool params = false);

  /// Throws PreconditionError unless p is a delta program for this delta,
  /// and, without parameters, takes no marked cells.
  RunResult run(const Program& p, const std::vector<Ordinal>& marks, const Budget& b,
                const SnapshotObserver& obs = {}) const;
};

/// A delta program that writes a b-string of 1s into slice S_b of tape 0
/// for every b < slices, then walks back to cell 0 and halts.  Throws
/// PreconditionError when delta fails the closure check or is too short.
Program s_routine_program(const Ordinal& delta, std::size_t slices = 21);

/// Finite cells of a tape holding 1, grouped by slice: b -> {g}.  Throws
/// PreconditionError on a 1 at an infinite cell or in a periodic tail.
std::map<std::uint64_t, std::set<std::uint64_t>> slice_contents(const Tape& t);

/// True when every slice b < slices holds exactly a b-string of 1s and no
/// other slice holds anything.
bool slices_hold_strings(const Tape& t, std::size_t slices);

/// Rules that may fire with the head on a limit cell and move it left.
/// Before the first limit the run is a finite path, and every stage from
/// the first visit to a state on a cycle of the state graph on holds a
/// state reachable from that cycle; only those states can see a head on a
/// limit cell.  Empty means the program never moves left on a limit cell.
std::vector<std::pair<std::size_t, std::uint32_t>> left_on_limit_rules(const Program& p);
inline bool check_no_left_on_limit(const Program& p) { return left_on_limit_rules(p).empty(); }

/// Marcher that halts on the first limit cell it is dropped on: it is on
/// cell w at time w + 1 whenever w < delta.
Program marcher_halt_at_limit(const Ordinal& delta);

struct SurveyRecord {
  std::uint64_t index = 0;
  Outcome outcome = Outcome::Unresolved;
  Ordinal time;
  std::optional<CellAddr> head;  // halted runs
  std::string detail;
};

/// Budget-relative: a cell missing from `reached` may still be reachable.
struct ReachabilityReport {
  Ordinal delta;
  Schema schema;
  std::uint64_t bound = 0;
  Budget budget;
  std::vector<Program> seeds;          // index bound + i
  std::vector<SurveyRecord> records;   // by index
  std::map<Ordinal, std::uint64_t> reached;
  std::vector<std::uint64_t> unresolved;

  /// The program behind an index, enumerated or seeded.
  std::optional<Program> program(std::uint64_t index) const;
};

/// Runs the first `bound` programs of the single-head delta schema with up
/// to `max_states` states, then the seeds, on blank tapes.  Runs go in
/// parallel on `threads` workers (0: hardware concurrency); the report
/// does not depend on scheduling.
ReachabilityReport reachability_survey(const Ordinal& delta, std::uint64_t bound, const Budget& b,
                                       const std::vector<Program>& seeds = {}, std::size_t max_states = 2,
                                       std::size_t threads = 0);

/// Reruns the program recorded for `cell` and checks it halts on that cell
/// at the recorded time.
bool replay_entry(const ReachabilityReport& r, const Ordinal& cell);

struct WellorderE {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;  // (n, m): n E m
  std::vector<std::uint64_t> field;                            // in E order
  Ordinal order_type;
};

/// n E m when n's cell lies below m's.  Throws PreconditionError on an
/// empty report.
WellorderE build_wellorder_E(const ReachabilityReport& r);

/// Irreflexive, transitive and total on its field, checked exhaustively.
bool is_strict_total_order(const WellorderE& e);

/// Order type of a finite set of cells, summed as ordinals.
Ordinal order_type_of(const std::set<Ordinal>& cells);

/// Tape cells coding the order 0 < 1 < ... < n-1.
std::vector<std::uint64_t> code_cells_for(std::uint64_t n);

/// The ordinal a tape codes.  Throws PreconditionError when the 1s do not
/// form a reflexive linear order or lie outside the finite cells.
Ordinal decode_order_code(const Tape& t);

/// A delta program that writes the code for n on its last tape and halts.
Program order_code_writer(const Ordinal& delta, std::uint64_t n);

/// Runs `writer` under b, decodes its output tape, and returns a program
/// that does what the writer does and then walks to cell beta_prime and
/// halts there.  Throws PreconditionError when the writer does not halt
/// within b, its code is invalid, or beta_prime exceeds the coded ordinal.
Program addressing_program(const Program& writer, const Ordinal& beta_prime, const Budget& b);

}  // namespace transfinite
