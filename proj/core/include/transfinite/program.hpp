#pragma once

// Machine programs shared by every family.
//
// Turing-style families (ittm, otm, delta) use transition tables:
//
//   family ittm                 # ittm | otm | delta | ibssm
//   name flipper
//   input 0                     # declared input arity
//   tapes 3                     # tape 0 input, 1 scratch, 2 output
//   head 0 : 1                  # head 0 reads tape 1; "head 0 : 0 1 2" reads all three
//   states check up             # index order matters: liminfs compare indices
//   start up
//   rule up    * -> 1 S check   # observation, writes, moves, target
//   rule check 1 -> 0 S up
//   rule check 0 -> _ S halt
//
// An observation is one bit per (head, spanned tape) slot, head 0's tapes
// first.  '*' in an observation is a wildcard, '_' in a write keeps the
// observed bit, a lone '*' or '_' covers every slot.  Moves are one of
// L R S per head.  No matching rule means the machine halts where it is.
// Delta programs additionally carry "delta <ordinal>".
//
// IBSSM flow charts number their nodes from 0; node 0 is the entry:
//
//   family ibssm
//   registers 2
//   node 0: add r0 r0 r1 -> 1
//   node 1: branch r0 r1 -> 0 | halt       # r0 <= r1 ? 0 : halt
//
// Node ops: const rD q | copy rD rS | add|sub|mul|div rD rA rB |
// branch rA rB -> t | f | halt | dinit rC | dread rD rC rH stride offset |
// dmove rC rH stride offset | dreset rC stride mask.
//
// "meta key value" lines attach free-form metadata.

#include "transfinite/error.hpp"
#include "transfinite/ordinal.hpp"
#include "transfinite/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace transfinite {

enum class Family { ITTM, OTM, Delta, IBSSM };

std::string_view family_name(Family f);
Family parse_family(std::string_view s);  // throws SyntaxError

enum class Move : std::uint8_t { Left, Right, Stay };

inline constexpr std::size_t kHalt = static_cast<std::size_t>(-1);

struct HeadSpec {
  std::vector<std::size_t> tapes;
  bool operator==(const HeadSpec&) const = default;
};

struct TmRule {
  std::vector<std::uint8_t> write;  // one bit per observed slot
  std::vector<Move> move;           // one per head
  std::size_t next = kHalt;         // kHalt: halt after writing and moving
  bool operator==(const TmRule&) const = default;
};

enum class Op : std::uint8_t {
  Const, Copy, Add, Sub, Mul, Div, Branch, Halt, DInit, DRead, DMove, DReset
};

std::string_view op_name(Op op);

struct BssNode {
  Op op = Op::Halt;
  std::vector<std::size_t> regs;
  Rational constant;
  std::uint64_t stride = 0;
  std::uint64_t offset = 0;  // dreset: tape mask
  std::size_t next = kHalt;
  std::size_t alt = kHalt;   // branch target when the comparison fails
  bool operator==(const BssNode&) const = default;
};

struct Program {
  Family family = Family::ITTM;
  std::string name;
  std::size_t input_arity = 0;

  std::size_t tape_count = 0;
  std::vector<HeadSpec> heads;
  std::vector<std::string> states;
  std::size_t start = 0;
  std::optional<Ordinal> delta;
  // Indexed by (state << width()) | observation.
  std::vector<std::optional<TmRule>> table;

  std::size_t register_count = 0;
  std::vector<BssNode> nodes;

  std::vector<std::pair<std::string, std::string>> meta;

  bool is_tm() const noexcept { return family != Family::IBSSM; }
  std::size_t head_count() const noexcept { return heads.size(); }
  /// Number of observed slots.
  std::size_t width() const noexcept;
  std::size_t state_count() const noexcept { return is_tm() ? states.size() : nodes.size(); }

  const std::optional<TmRule>& rule(std::size_t state, std::uint32_t obs) const {
    return table[(state << width()) | obs];
  }
  std::size_t rule_count() const;
  /// IBSSM nodes other than halt.
  std::size_t computation_nodes() const;
  /// Tape indices some rule can write a changed bit to.
  std::vector<bool> writable_tapes() const;

  std::optional<std::string> meta_value(std::string_view key) const;
  void set_meta(const std::string& key, const std::string& value);

  bool operator==(const Program&) const = default;
};

/// Parses and validates.  Throws ProgramError with line/column diagnostics.
Program parse_program(std::string_view text);
/// Canonical text: states in index order, rules by state then observation,
/// explicit writes.  parse_program(print_program(p)) == p.
std::string print_program(const Program& p);
Program load_program(const std::filesystem::path& path);

/// Semantic checks applied by parse_program; exposed for generated
/// programs.  Returns every problem found (empty means valid).
std::vector<Diagnostic> validate_program(const Program& p);

/// Observation bits rendered as text, slot 0 first.
std::string observation_text(std::uint32_t obs, std::size_t width);

}  // namespace transfinite
