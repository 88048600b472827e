#include "transfinite/snapshot.hpp"

#include "transfinite/error.hpp"

#include <charconv>

namespace transfinite {

std::uint64_t Snapshot::config_hash() const {
  std::uint64_t h = mix64(state + 0x1234);
  for (std::size_t i = 0; i < heads.size(); ++i)
    h = mix64(h ^ (heads[i].base.hash() * 31 + heads[i].offset + i * 0x100000001b3ULL));
  for (std::size_t i = 0; i < tapes.size(); ++i) h = mix64(h + tapes[i].hash() * (2 * i + 3));
  for (std::size_t i = 0; i < registers.size(); ++i) h = mix64(h + registers[i].hash() * (2 * i + 5));
  return h;
}

bool Snapshot::same_configuration(const Snapshot& o) const {
  return state == o.state && heads == o.heads && tapes == o.tapes && registers == o.registers;
}

std::string Snapshot::str() const {
  std::string out = "t=" + time.str() + " q=" + std::to_string(state);
  if (!heads.empty()) {
    out += " h=[";
    for (std::size_t i = 0; i < heads.size(); ++i) out += (i ? "," : "") + heads[i].str();
    out += ']';
  }
  for (std::size_t i = 0; i < tapes.size(); ++i) out += " T" + std::to_string(i) + '=' + tapes[i].str();
  if (!registers.empty()) {
    out += " R=[";
    for (std::size_t i = 0; i < registers.size(); ++i) out += (i ? "," : "") + registers[i].str();
    out += ']';
  }
  return out;
}

// ------------------------------------------------------------------ Budget

Budget Budget::parse(std::string_view text) {
  Budget b;
  bool seen[3] = {false, false, false};
  auto bad = [&] { return SyntaxError("bad budget '" + std::string(text) + "': want steps=N,level=K,snaps=M"); };
  std::string_view rest = text;
  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw bad();
    std::string_view key = item.substr(0, eq);
    std::string_view val = item.substr(eq + 1);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc() || ptr != val.data() + val.size() || val.empty()) throw bad();
    int slot = key == "steps" ? 0 : key == "level" ? 1 : key == "snaps" ? 2 : -1;
    if (slot < 0 || seen[slot]) throw bad();
    seen[slot] = true;
    (slot == 0 ? b.steps : slot == 1 ? b.level : b.snaps) = v;
  }
  if (!seen[0] || !seen[1] || !seen[2]) throw bad();
  return b;
}

std::string Budget::str() const {
  return "steps=" + std::to_string(steps) + ",level=" + std::to_string(level) + ",snaps=" + std::to_string(snaps);
}

void Budget::validate() const {
  if (steps == 0 || level == 0 || snaps == 0) throw PreconditionError("budget fields must be positive: " + str());
}

// ---------------------------------------------------------------- evidence

std::string_view cycle_kind_name(CycleKind k) {
  return k == CycleKind::ExactRepeat ? "exact" : "drift";
}

std::string CycleEvidence::str() const {
  std::string out = std::string(cycle_kind_name(kind)) + " level=" + std::to_string(level) +
                    " start=" + start_time.str() + " period=" + std::to_string(period);
  if (kind == CycleKind::RightDrift) {
    out += " shift=" + std::to_string(shift_per_period) + " stable=" + std::to_string(stable_prefix_length);
    if (!wake_values.empty()) {
      out += " wake=";
      for (const auto& [r, b] : wake_values) out += static_cast<char>('0' + b);
    }
    for (const auto& [reg, blocks] : drifting_blocks) {
      out += " r" + std::to_string(reg) + ":";
      for (std::size_t i = 0; i < blocks.size(); ++i) out += (i ? "," : "") + std::to_string(blocks[i]);
    }
  }
  return out;
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Halted: return "halted";
    case Outcome::Looping: return "looping";
    case Outcome::Unresolved: return "unresolved";
    case Outcome::Crashed: return "crashed";
    case Outcome::ContinuityViolation: return "continuity-violation";
  }
  return "?";
}

std::string RunResult::str() const {
  std::string out = std::string(outcome_name(outcome)) + " at " + time.str();
  if (!detail.empty()) out += " (" + detail + ")";
  return out;
}

}  // namespace transfinite
