#include "lbscrypt/attacks.hpp"

namespace lbscrypt::attacks {

namespace {

using Json = nlohmann::ordered_json;

Json big(const BigInt& v) { return numkit::to_dec(v); }

Json rational(const Rational& r) {
  return numkit::is_integer(r) ? Json(numkit::to_dec(r.get_num())) : Json(r.get_str());
}

Json bigs(const std::vector<BigInt>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(big(v));
  return out;
}

Json point(const GridPoint& p) { return Json::array({big(p.x), big(p.y)}); }

Json differences(const DifferenceSet& d) {
  Json out = Json::array();
  for (const auto& [pair, v] : d) out.push_back({{"i", pair.first}, {"j", pair.second}, {"delta", big(v)}});
  return out;
}

}  // namespace

std::string flaw_report_to_json(const FlawReport& r, const Json& manifest) {
  Json j;
  j["format"] = kFlawFormat;
  j["manifest"] = manifest;
  j["trials"] = r.trials;
  j["l"] = r.l;
  j["k_sec"] = r.k_sec;
  j["m"] = big(r.m);
  j["agreements"] = r.agreements;
  j["agreement_rate"] = r.agreement_rate;
  j["control_agreements"] = r.control_agreements;
  j["control_agreement_rate"] = r.control_agreement_rate;
  j["equal_distance_trials"] = r.equal_distance_trials;
  Json ces = Json::array();
  for (const auto& c : r.counterexamples) {
    ces.push_back({{"label", c.label},
                   {"z", big(c.z)},
                   {"z_prime", big(c.z_prime)},
                   {"rho", big(c.rho)},
                   {"wbar", big(c.wbar)},
                   {"rhobar", big(c.rhobar)},
                   {"epsilon", c.epsilon},
                   {"decision", c.decision},
                   {"decision_prime", c.decision_prime},
                   {"msb", c.truth},
                   {"msb_prime", c.truth_prime}});
  }
  j["counterexamples"] = ces;
  j["decision_rule_note"] = r.decision_rule_note;
  return j.dump(2) + "\n";
}

std::string recovery_report_to_json(const RecoveryReport& r, const Json& manifest) {
  Json j;
  j["format"] = kRecoveryFormat;
  j["manifest"] = manifest;
  j["source"] = r.source;
  j["virtual_only"] = r.virtual_only;
  j["unique"] = r.unique;
  j["partial"] = r.partial;
  j["surviving_assignments"] = r.surviving_assignments;
  j["differences"] = differences(r.differences);
  if (r.virtual_location) {
    j["virtual_location"] = Json::array({rational(r.virtual_location->tx), rational(r.virtual_location->ty)});
  } else {
    j["virtual_location"] = nullptr;
  }
  j["distances"] = bigs(r.distances);
  j["user_location"] = r.user_location ? point(*r.user_location) : Json(nullptr);

  Json cands = Json::array();
  for (const auto& c : r.candidates) {
    cands.push_back({{"virtual_location", Json::array({big(c.tx), big(c.ty)})},
                     {"distances", bigs(c.distances)},
                     {"user_location", c.location ? point(*c.location) : Json(nullptr)}});
  }
  j["candidates"] = cands;

  if (r.mask_candidates) {
    Json pairs = Json::array();
    for (const auto& pc : r.mask_candidates->pairs) {
      pairs.push_back({{"i", pc.a},
                       {"j", pc.b},
                       {"z", big(pc.z)},
                       {"candidates", bigs(pc.candidates)},
                       {"survivors", bigs(pc.survivors)}});
    }
    j["mask_candidates"] = pairs;
  }

  j["match"] = {{"differences", r.differences_match},
                {"true_assignment_survived", r.true_assignment_survived},
                {"virtual_location", r.virtual_location_match},
                {"distances", r.distances_match},
                {"user_location", r.location_match},
                {"sidecar_among_candidates", r.sidecar_among_candidates}};
  return j.dump(2) + "\n";
}

std::string unmask_report_to_json(const std::vector<UnmaskEntry>& entries, const BigInt& m, bool signed_mask,
                                  const Json& manifest) {
  Json j;
  j["format"] = kUnmaskFormat;
  j["manifest"] = manifest;
  j["m"] = big(m);
  j["signed_mask"] = signed_mask;
  Json list = Json::array();
  for (const auto& e : entries) {
    list.push_back({{"z", big(e.z)}, {"count", e.candidates.size()}, {"candidates", bigs(e.candidates)}});
  }
  j["entries"] = list;
  return j.dump(2) + "\n";
}

}  // namespace lbscrypt::attacks
