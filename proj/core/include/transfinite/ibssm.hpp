#pragma once

// Infinite time BSS machines over exact register values.
//
// Node index is the state; each executed node is one stage.  Digit macros
// act natively on StructuredCode registers:
//
//   dinit rC                    rC := r(1) if rC = 0; a code stays as it is
//   dread rD rC rH s o          rD := parity of the shift of block s*k+o,
//                               where k = 1/rH (k = 0 when rH = 0); an
//                               empty block reads 0
//   dmove rC rH s o             the 1 in block s*k+o moves one place right
//   dreset rC s mask            every empty block b with bit (b mod s) of
//                               mask set gets its 1 back at shift 0
//
// Each stands for a finite loop of multiplications, divisions and
// comparisons by powers of ten on the code's digits.

#include "transfinite/limit_engine.hpp"
#include "transfinite/machines.hpp"

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace transfinite {

enum class LimitRule { Liminf, Continuity };

std::string_view limit_rule_name(LimitRule r);
LimitRule parse_limit_rule(std::string_view s);  // throws SyntaxError

struct IbssmConfig {
  LimitRule rule = LimitRule::Liminf;
  // Runs whose rationals outgrow this many bits stop as Unresolved.
  std::size_t rational_bit_cap = 2048;
  // Registers plus code blocks kept for one approach's history.
  std::size_t history_cap = 4'000'000;
};

/// One node in place.  A crash leaves time at the crashing stage and
/// puts the reason in `why`.
StepStatus bss_step(Snapshot& s, const Program& p, std::string* why = nullptr);

/// Registers hold the inputs in order, the rest 0; node 0 first.
Snapshot ibssm_initial(const Program& p, const std::vector<Rational>& inputs);

/// Liminf of a register that runs through `cycle` forever, the blocks in
/// `drifting` moving right without bound.
BssValue register_liminf(const std::vector<BssValue>& cycle, const std::set<std::uint64_t>& drifting = {});

/// s+ at precision n: the least n-digit rational t lying above some value
/// of the cycle by at most 10^-n.  `holds` checks it against the liminf:
/// s+ - 10^-n <= first n digits of the liminf, and liminf <= s+.
struct RegisterLiminfWitness {
  unsigned n = 0;
  Rational t;
  bool holds = false;
};

RegisterLiminfWitness s_plus_witness(const std::vector<BssValue>& cycle, unsigned n);

class RegisterModel : public MachineModel {
public:
  RegisterModel(Program p, Snapshot init, IbssmConfig cfg);

  Snapshot initial() const override { return init_; }
  ApproachResult approach(const Snapshot& start, const Ordinal& limit_time, std::uint64_t steps,
                          const SnapshotObserver* obs) const override;
  bool continuity() const override { return cfg_.rule == LimitRule::Continuity; }
  const Program& program() const noexcept { return p_; }

private:
  Program p_;
  Snapshot init_;
  IbssmConfig cfg_;
};

RunResult run_ibssm(const Program& p, const std::vector<Rational>& inputs, const Budget& b, const IbssmConfig& cfg,
                    const SnapshotObserver& obs = {});
RunResult run_liminf(const Program& p, const std::vector<Rational>& inputs, const Budget& b,
                     const SnapshotObserver& obs = {});
RunResult run_continuity(const Program& p, const std::vector<Rational>& inputs, const Budget& b,
                         const SnapshotObserver& obs = {});

/// Halting time below w^(k+1), k the number of computation nodes.
bool check_halting_bound(const Program& p, const RunResult& r);

}  // namespace transfinite
