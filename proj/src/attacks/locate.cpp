#include "lbscrypt/attacks.hpp"
#include "lbscrypt/errors.hpp"

namespace lbscrypt::attacks {

DifferenceSet recover_differences_from_z(const std::map<std::pair<std::size_t, std::size_t>, BigInt>& z, unsigned l) {
  const BigInt two_l = numkit::pow2(l);
  DifferenceSet out;
  for (const auto& [pair, value] : z) out[pair] = value - two_l;
  return out;
}

VirtualLocation recover_virtual_location(const DifferenceSet& deltas, const std::vector<GridPoint>& pois) {
  std::vector<numkit::LinearRow> rows;
  rows.reserve(deltas.size());
  for (const auto& [pair, delta] : deltas) {
    auto [i, j] = pair;
    if (i >= pois.size() || j >= pois.size()) {
      throw AttackError("virtual_location", "difference refers to POI outside the list");
    }
    const GridPoint& pi = pois[i];
    const GridPoint& pj = pois[j];
    // d_i - d_j = 2 (P_j - P_i) . T + |P_i|^2 - |P_j|^2
    rows.push_back({2 * (pj.x - pi.x), 2 * (pj.y - pi.y),
                    delta + (pj.x * pj.x + pj.y * pj.y) - (pi.x * pi.x + pi.y * pi.y)});
  }
  numkit::LinearSolution sol = numkit::solve_linear_exact(rows);
  if (sol.status == numkit::SolveStatus::underdetermined) {
    throw AttackError("virtual_location", "underdetermined: POIs are collinear or too few differences");
  }
  if (sol.status == numkit::SolveStatus::inconsistent) {
    throw AttackError("virtual_location", "inconsistent: no point matches every difference");
  }
  return {sol.x, sol.y};
}

std::vector<Rational> recover_distances(const DifferenceSet& deltas, const VirtualLocation& loc,
                                        const std::vector<GridPoint>& pois) {
  if (pois.empty()) throw AttackError("distances", "no POIs");
  auto circle = [&](const GridPoint& p) {
    Rational dx = loc.tx - Rational(p.x);
    Rational dy = loc.ty - Rational(p.y);
    return Rational(dx * dx + dy * dy);
  };
  std::vector<Rational> d(pois.size());
  d[0] = circle(pois[0]);
  for (std::size_t i = 1; i < pois.size(); ++i) {
    auto it = deltas.find({0, i});
    d[i] = it != deltas.end() ? Rational(d[0] - Rational(it->second)) : circle(pois[i]);
  }
  for (const auto& [pair, delta] : deltas) {
    auto [i, j] = pair;
    if (d[i] - d[j] != Rational(delta)) {
      throw AttackError("distances", "inconsistent: d_" + std::to_string(i) + " - d_" + std::to_string(j) +
                                         " disagrees with the recovered difference");
    }
  }
  for (std::size_t i = 0; i < pois.size(); ++i) {
    if (d[i] != circle(pois[i])) {
      throw AttackError("distances", "inconsistent: d_" + std::to_string(i) + " does not match the geometry");
    }
  }
  return d;
}

UserLocation invert_moving_average(const BigInt& tx, const BigInt& ty, const std::vector<GridPoint>& history,
                                   unsigned t, bool history_known) {
  UserLocation out;
  out.tx = tx;
  out.ty = ty;
  if (!history_known) {
    out.virtual_only = true;
    return out;
  }
  if (t < 1 || history.size() != t - 1) {
    throw AttackError("moving_average", "history has " + std::to_string(history.size()) + " entries, expected " +
                                            std::to_string(t == 0 ? 0 : t - 1));
  }
  GridPoint p{tx, ty};
  for (const auto& h : history) {
    p.x -= h.x;
    p.y -= h.y;
  }
  out.location = p;
  return out;
}

}  // namespace lbscrypt::attacks
