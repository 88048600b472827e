#include "transfinite/otm.hpp"

#include "transfinite/error.hpp"

namespace transfinite {

StepOutcome otm_step(const Snapshot& s, const Program& p) {
  if (p.family != Family::OTM)
    throw PreconditionError("expected an otm program, got " + std::string(family_name(p.family)));
  StepOutcome out{s, StepStatus::Continue};
  out.status = tm_step(out.snapshot, p);
  return out;
}

std::vector<CellAddr> parse_marks(std::string_view text) {
  std::vector<CellAddr> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) throw SyntaxError("empty entry in mark list");
    out.push_back(CellAddr::from_ordinal(Ordinal::parse(item)));
  }
  return out;
}

RunResult otm_run(const Program& p, const std::vector<Ordinal>& marks, const Budget& b, const SnapshotObserver& obs) {
  if (p.family != Family::OTM)
    throw PreconditionError("expected an otm program, got " + std::string(family_name(p.family)));
  std::vector<CellAddr> cells;
  for (const auto& m : marks) cells.push_back(CellAddr::from_ordinal(m));
  TmModel m(p, tm_initial(p, cells));
  return run_machine(m, b, obs);
}

}  // namespace transfinite
