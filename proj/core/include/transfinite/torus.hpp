#pragma once

// Transfinite iteration of affine maps on the torus [0,1)^n: f(x) is
// frac(A x + b), and at limits every coordinate takes its liminf.

#include "transfinite/limit_engine.hpp"

#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace transfinite {

using TorusPoint = std::vector<Rational>;

struct TorusMap {
  std::vector<std::vector<Rational>> a;  // n x n
  std::vector<Rational> b;

  std::size_t dim() const noexcept { return b.size(); }
  TorusPoint operator()(const TorusPoint& x) const;

  /// Text form, one row per line:
  ///   dim 1
  ///   row 1 | 1/3
  /// Throws SyntaxError.
  static TorusMap parse(std::string_view text);
  static TorusMap rotation(const TorusPoint& shift);
  std::string str() const;
};

/// "1/6, 1/2" -> point; coordinates must lie in [0,1).
TorusPoint parse_point(std::string_view text);
std::string point_str(const TorusPoint& x);

struct TorusResult {
  bool resolved = false;
  TorusPoint point;
  RunResult stop;  // why alpha was not reached otherwise
};

TorusResult iterate_torus(const TorusMap& f, const TorusPoint& x, const Ordinal& alpha, const Budget& b,
                          const SnapshotObserver& obs = {});

/// Least stage at which each point's orbit sits at the origin, among the
/// stages the engine visits within the budget; absent when none was seen.
std::map<TorusPoint, std::optional<Ordinal>> torus_origin_probe(const TorusMap& f,
                                                                const std::vector<TorusPoint>& points,
                                                                const Budget& b);

}  // namespace transfinite
