#include "transfinite/torus.hpp"

#include "transfinite/error.hpp"

#include <sstream>
#include <unordered_map>

namespace transfinite {

TorusPoint TorusMap::operator()(const TorusPoint& x) const {
  if (x.size() != dim()) throw PreconditionError("torus point has the wrong dimension");
  TorusPoint y(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    Rational v = b[i];
    for (std::size_t j = 0; j < dim(); ++j) v += a[i][j] * x[j];
    y[i] = frac(v);
  }
  return y;
}

TorusMap TorusMap::parse(std::string_view text) {
  TorusMap m;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0, lineno = 0;
  bool have_dim = false;
  auto fail = [&](const std::string& what) {
    return SyntaxError("torus map line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "dim") {
      if (have_dim || !(ls >> n) || n == 0) throw fail("bad dim");
      have_dim = true;
    } else if (kw == "row") {
      if (!have_dim) throw fail("row before dim");
      std::vector<Rational> row;
      std::string tok;
      while (ls >> tok && tok != "|") row.push_back(parse_rational(tok));
      if (tok != "|" || row.size() != n) throw fail("row needs " + std::to_string(n) + " coefficients then '| b'");
      if (!(ls >> tok)) throw fail("missing constant");
      m.a.push_back(std::move(row));
      m.b.push_back(parse_rational(tok));
      if (ls >> tok) throw fail("trailing '" + tok + "'");
    } else {
      throw fail("unknown keyword '" + kw + "'");
    }
  }
  if (!have_dim || m.a.size() != n) throw SyntaxError("torus map needs dim and one row per coordinate");
  return m;
}

TorusMap TorusMap::rotation(const TorusPoint& shift) {
  TorusMap m;
  std::size_t n = shift.size();
  m.a.assign(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) m.a[i][i] = 1;
  m.b = shift;
  return m;
}

std::string TorusMap::str() const {
  std::string out = "dim " + std::to_string(dim()) + "\n";
  for (std::size_t i = 0; i < dim(); ++i) {
    out += "row";
    for (const auto& v : a[i]) out += ' ' + format_rational(v);
    out += " | " + format_rational(b[i]) + "\n";
  }
  return out;
}

TorusPoint parse_point(std::string_view text) {
  TorusPoint x = parse_rational_list(text);
  for (const auto& v : x)
    if (v < 0 || v >= 1) throw SyntaxError("torus coordinate " + format_rational(v) + " not in [0,1)");
  return x;
}

std::string point_str(const TorusPoint& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) out += (i ? ", " : "") + format_rational(x[i]);
  return out + ")";
}

namespace {

TorusPoint point_of(const Snapshot& s) {
  TorusPoint x;
  for (const auto& v : s.registers) x.push_back(v.rational());
  return x;
}

// The orbit as a one-node register machine under the liminf rule.
class TorusModel : public MachineModel {
public:
  TorusModel(const TorusMap& f, const TorusPoint& x) : f_(f) {
    if (x.size() != f.dim()) throw PreconditionError("torus point has the wrong dimension");
    for (const auto& v : x) {
      if (v < 0 || v >= 1) throw PreconditionError("torus coordinate " + format_rational(v) + " not in [0,1)");
      init_.registers.emplace_back(v);
    }
  }

  Snapshot initial() const override { return init_; }

  ApproachResult approach(const Snapshot& y, const Ordinal& limit_time, std::uint64_t steps,
                          const SnapshotObserver* obs) const override {
    std::vector<Snapshot> hist{y};
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
    for (std::size_t n = 0;; ++n) {
      const Snapshot& cur = hist[n];
      if (n > 0 && obs && *obs) (*obs)(cur, SnapshotRole::Successor, nullptr);
      auto& bucket = seen[cur.config_hash()];
      for (std::size_t i : bucket)
        if (hist[i].same_configuration(cur)) return resolve(hist, i, n, limit_time);
      bucket.push_back(n);
      if (n >= steps) {
        ApproachResult r;
        r.kind = ApproachResult::Kind::Unresolved;
        r.snapshot = cur;
        r.detail = "orbit not periodic within the step budget";
        return r;
      }
      Snapshot next;
      next.time = add(cur.time, Ordinal(1));
      for (const auto& v : f_(point_of(cur))) next.registers.emplace_back(v);
      hist.push_back(std::move(next));
    }
  }

private:
  static ApproachResult resolve(const std::vector<Snapshot>& hist, std::size_t i, std::size_t j,
                                const Ordinal& limit_time) {
    ApproachResult r;
    r.kind = ApproachResult::Kind::Limit;
    std::size_t dim = hist[0].registers.size();
    r.snapshot.time = limit_time;
    r.summary.registers.resize(dim);
    r.summary.constant.assign(dim, true);
    r.summary.first = hist[0].registers;
    for (std::size_t c = 0; c < dim; ++c) {
      Rational lo = hist[i].registers[c].rational();
      for (std::size_t k = i; k < j; ++k) lo = std::min(lo, hist[k].registers[c].rational());
      r.snapshot.registers.emplace_back(lo);
      for (std::size_t k = 0; k <= j; ++k) {
        r.summary.registers[c].add(hist[k].registers[c]);
        if (!(hist[k].registers[c] == hist[0].registers[c])) r.summary.constant[c] = false;
      }
    }
    r.evidence.kind = CycleKind::ExactRepeat;
    r.evidence.start_time = hist[i].time;
    r.evidence.start_index = i;
    r.evidence.period = j - i;
    r.looping = r.snapshot.same_configuration(hist[i]);
    return r;
  }

  TorusMap f_;
  Snapshot init_;
};

}  // namespace

TorusResult iterate_torus(const TorusMap& f, const TorusPoint& x, const Ordinal& alpha, const Budget& b,
                          const SnapshotObserver& obs) {
  TorusModel m(f, x);
  UntilResult u = run_until(m, alpha, b, obs);
  TorusResult out;
  out.resolved = u.reached;
  if (u.reached) out.point = point_of(u.snapshot);
  else out.stop = std::move(u.stop);
  return out;
}

std::map<TorusPoint, std::optional<Ordinal>> torus_origin_probe(const TorusMap& f,
                                                                const std::vector<TorusPoint>& points,
                                                                const Budget& b) {
  std::map<TorusPoint, std::optional<Ordinal>> out;
  for (const auto& x : points) {
    std::optional<Ordinal> hit;
    SnapshotObserver obs = [&](const Snapshot& s, SnapshotRole, const CycleEvidence*) {
      if (hit) return;
      bool zero = true;
      for (const auto& v : s.registers) zero = zero && v.rational() == 0;
      if (zero) hit = s.time;
    };
    TorusModel m(f, x);
    run_machine(m, b, obs);
    out[x] = hit;
  }
  return out;
}

}  // namespace transfinite
