#include "lbscrypt/attacks.hpp"
#include "lbscrypt/errors.hpp"

namespace lbscrypt::attacks {

namespace {

using PairMap = std::map<std::pair<std::size_t, std::size_t>, BigInt>;

bool integral(const Rational& r) { return numkit::is_integer(r); }

// One assignment of differences through to a concrete location; nullopt if
// the assignment has no integral, in-range realisation.
std::optional<LocationCandidate> realise(const DifferenceSet& deltas, const std::vector<GridPoint>& scaled_pois,
                                         const protocol::PublicView& view, bool strict) {
  try {
    VirtualLocation loc = recover_virtual_location(deltas, scaled_pois);
    if (!integral(loc.tx) || !integral(loc.ty)) {
      throw AttackError("virtual_location", "solution is not on the integer grid");
    }
    std::vector<Rational> d = recover_distances(deltas, loc, scaled_pois);
    LocationCandidate c;
    c.deltas = deltas;
    c.tx = loc.tx.get_num();
    c.ty = loc.ty.get_num();
    for (const auto& di : d) {
      if (!integral(di) || di < 0 || di > Rational(view.m)) throw AttackError("distances", "distance outside [0, m]");
      c.distances.push_back(di.get_num());
    }
    UserLocation u = invert_moving_average(c.tx, c.ty, view.known_history, view.t, !view.random_history);
    c.location = u.location;
    return c;
  } catch (const AttackError&) {
    if (strict) throw;
    return std::nullopt;
  }
}

DifferenceSet true_differences(const protocol::GroundTruth& s) {
  DifferenceSet out;
  for (std::size_t a = 0; a < s.distances.size(); ++a) {
    for (std::size_t b = a + 1; b < s.distances.size(); ++b) out[{a, b}] = s.distances[a] - s.distances[b];
  }
  return out;
}

}  // namespace

RecoveryReport full_attack_pipeline(const protocol::QueryTranscript& tr, const PipelineOptions& opts) {
  const protocol::PublicView& view = tr.view;
  const bool masked = view.mode == protocol::Mode::masked;
  if (!masked && !view.leak_z) {
    throw AttackError("pipeline", "transcript exposes no z values (needs masked mode or leak_z)");
  }
  if (opts.require_z_leak && !view.leak_z) throw AttackError("pipeline", "transcript is not a z-leak run");

  PairMap z;
  for (const auto& c : tr.comparisons) {
    if (!c.lbs_z) throw AttackError("pipeline", "comparison without a decrypted z");
    z[{c.a, c.b}] = *c.lbs_z;
  }
  const std::size_t n = view.pois.size();
  std::vector<GridPoint> scaled;
  for (const auto& p : view.pois) scaled.push_back({p.x * view.t, p.y * view.t});

  RecoveryReport r;
  r.source = masked ? "masked" : "z-leak";
  r.virtual_only = view.random_history;

  std::vector<DifferenceSet> assignments;
  if (masked) {
    MaskCandidateSet set = build_candidates(n, z, view.m, view.signed_mask);
    set.anchors = scaled;
    FilterResult f = consistency_filter(set, opts.node_budget);
    r.mask_candidates = std::move(set);
    r.partial = f.partial;
    r.surviving_assignments = f.assignments.size();
    assignments = std::move(f.assignments);
  } else {
    assignments.push_back(recover_differences_from_z(z, view.l));
    r.surviving_assignments = 1;
  }

  for (const auto& a : assignments) {
    if (auto c = realise(a, scaled, view, !masked)) r.candidates.push_back(std::move(*c));
  }
  if (r.candidates.empty()) throw AttackError("pipeline", "no difference assignment yields a grid location");

  r.unique = r.candidates.size() == 1 && !r.partial;
  if (r.unique) {
    const LocationCandidate& c = r.candidates.front();
    r.differences = c.deltas;
    r.virtual_location = VirtualLocation{Rational(c.tx), Rational(c.ty)};
    r.distances = c.distances;
    r.user_location = c.location;
  }

  // Match flags.
  const protocol::GroundTruth& s = tr.sidecar;
  DifferenceSet truth = true_differences(s);
  r.true_assignment_survived = false;
  for (const auto& a : assignments) r.true_assignment_survived |= a == truth;
  if (r.unique) {
    r.differences_match = r.differences == truth;
    r.virtual_location_match = r.virtual_location->tx == Rational(s.tx) && r.virtual_location->ty == Rational(s.ty);
    r.distances_match = r.distances == s.distances;
    r.location_match = r.user_location.has_value() && *r.user_location == s.user_location;
  }
  for (const auto& c : r.candidates) {
    bool hit = r.virtual_only ? (c.tx == s.tx && c.ty == s.ty) : (c.location && *c.location == s.user_location);
    r.sidecar_among_candidates |= hit;
  }
  return r;
}

}  // namespace lbscrypt::attacks
