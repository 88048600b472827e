#include "transfinite/ittm.hpp"

#include "transfinite/error.hpp"

namespace transfinite {

namespace {

void require_ittm(const Program& p) {
  if (p.family != Family::ITTM)
    throw PreconditionError("expected an ittm program, got " + std::string(family_name(p.family)));
}

}  // namespace

StepOutcome ittm_step(const Snapshot& s, const Program& p) {
  require_ittm(p);
  StepOutcome out{s, StepStatus::Continue};
  out.status = tm_step(out.snapshot, p);
  return out;
}

std::vector<CellAddr> parse_bit_input(std::string_view bits) {
  std::vector<CellAddr> ones;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      ones.emplace_back(Ordinal(), i);
    } else if (bits[i] != '0') {
      throw SyntaxError("input bits must be 0 or 1, got '" + std::string(1, bits[i]) + "'");
    }
  }
  return ones;
}

Snapshot ittm_initial(const Program& p, std::string_view bits) {
  require_ittm(p);
  return tm_initial(p, parse_bit_input(bits));
}

RunResult ittm_run(const Program& p, std::string_view bits, const Budget& b, const SnapshotObserver& obs) {
  TmModel m(p, ittm_initial(p, bits));
  return run_machine(m, b, obs);
}

RunResult ittm_multihead_demo(const Program& p, const Budget& b, const SnapshotObserver& obs) {
  require_ittm(p);
  if (p.head_count() < 2)
    throw PreconditionError("multi-head run needs at least 2 heads, program has " + std::to_string(p.head_count()));
  return ittm_run(p, "", b, obs);
}

}  // namespace transfinite
