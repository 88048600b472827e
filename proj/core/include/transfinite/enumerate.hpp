#pragma once

#include "transfinite/program.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace transfinite {

// Canonical program enumeration.
//
// Turing schemas: three tapes, every head reads only the scratch tape
// (tape 1), states q0..q(n-1) with q0 the start state.  Each (state,
// observation) cell of the table independently takes one of
//   1 + 2^heads * 3^heads * (n + 1)
// options: no rule, or (writes, moves, target) with target ranging over the
// n states and halt.  Tables are ordered by state count, then
// lexicographically with (q0, 0...0) most significant.
//
// IBSSM schema: two registers, constants {0, 1}, operations
// const/copy/add/sub/mul/div/branch/halt, targets ranging over the nodes and
// halt.  Flow charts are ordered by node count, then lexicographically.
//
// Index e is the raw position in this order; programs failing validation
// (possible only for multi-head schemas) are skipped but never renumber
// the others.  Each program's name records its index.

struct Schema {
  Family family = Family::ITTM;
  std::size_t max_states = 1;
  std::size_t head_count = 1;
  std::optional<Ordinal> delta;  // required for Family::Delta
};

/// Total number of indices in the schema (valid or not), saturating.
std::uint64_t schema_size(const Schema& s);

/// Program at raw index e, or nullopt if that table fails validation.
/// Throws PreconditionError if e >= schema_size(s).
std::optional<Program> program_at(const Schema& s, std::uint64_t e);

/// The first `bound` indices of the schema, invalid ones skipped.
std::vector<Program> enumerate_programs(const Schema& s, std::uint64_t bound);

/// Index recorded in an enumerated program's name, if any.
std::optional<std::uint64_t> enumeration_index(const Program& p);

}  // namespace transfinite
