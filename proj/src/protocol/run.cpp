#include "lbscrypt/errors.hpp"
#include "lbscrypt/protocol.hpp"

#include <algorithm>

namespace lbscrypt::protocol {

namespace {

// Independent streams per role so that, for one seed, everything before the
// comparison phase is identical across modes.
enum Stream : std::uint64_t { kCa = 0, kUser = 1, kEdge = 2, kLbs = 3, kHistory = 4 };

using Json = nlohmann::ordered_json;

class MessageLog {
 public:
  explicit MessageLog(std::vector<Message>& sink) : sink_(sink) {}

  void send(Entity from, Entity to, std::string kind, Json body) {
    Message m;
    m.seq = sink_.size();
    m.from = from;
    m.to = to;
    m.kind = std::move(kind);
    m.body = std::move(body);
    sink_.push_back(std::move(m));
  }

 private:
  std::vector<Message>& sink_;
};

Json blob_list(const std::vector<dgk::Ciphertext>& cts) {
  Json out = Json::array();
  for (const auto& c : cts) out.push_back(c.to_hex());
  return out;
}

// Uniform points in the bounding box of the scene, rejected until they keep
// every pairwise distance within the world diameter.
std::vector<GridPoint> draw_random_history(const ScenarioConfig& cfg, numkit::SeededRng& rng) {
  std::vector<GridPoint> anchors{cfg.user_location};
  anchors.insert(anchors.end(), cfg.pois.begin(), cfg.pois.end());
  BigInt min_x = anchors[0].x, max_x = anchors[0].x, min_y = anchors[0].y, max_y = anchors[0].y;
  for (const auto& p : anchors) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const BigInt d2 = cfg.world_diameter * cfg.world_diameter;
  std::vector<GridPoint> out;
  for (unsigned i = 0; i + 1 < cfg.t; ++i) {
    GridPoint pick = anchors[numkit::rand_u64_below(rng, anchors.size())];
    for (int attempt = 0; attempt < 64; ++attempt) {
      GridPoint cand{numkit::rand_range(rng, min_x, max_x), numkit::rand_range(rng, min_y, max_y)};
      bool ok = std::all_of(anchors.begin(), anchors.end(),
                            [&](const GridPoint& a) { return squared_distance(a, cand) <= d2; }) &&
                std::all_of(out.begin(), out.end(), [&](const GridPoint& a) { return squared_distance(a, cand) <= d2; });
      if (ok) {
        pick = cand;
        break;
      }
    }
    out.push_back(pick);
  }
  return out;
}

}  // namespace

QueryTranscript run_full_query(const ScenarioConfig& cfg) {
  validate(cfg);
  numkit::SeededRng ca_rng = numkit::SeededRng::derive(cfg.seed, kCa);
  numkit::SeededRng user_rng = numkit::SeededRng::derive(cfg.seed, kUser);
  numkit::SeededRng en_rng = numkit::SeededRng::derive(cfg.seed, kEdge);
  numkit::SeededRng lbs_rng = numkit::SeededRng::derive(cfg.seed, kLbs);
  numkit::SeededRng history_rng = numkit::SeededRng::derive(cfg.seed, kHistory);

  QueryTranscript tr;
  MessageLog log(tr.messages);

  const BigInt m = distance_bound(cfg);
  const unsigned l = comparison_bits(m);
  const std::size_t n = cfg.pois.size();

  // --- Initialization (CA) ---
  KeyRing keys = ca_setup(cfg, ca_rng);
  const BigInt& p = keys.she.pk->plain_modulus();
  for (Entity e : {Entity::user, Entity::edge_node, Entity::lbs}) {
    Json held = Json::array();
    for (const auto& [name, holders] : keys.holders) {
      if (std::find(holders.begin(), holders.end(), e) != holders.end()) held.push_back(name);
    }
    log.send(Entity::ca, e, "key_distribution",
             {{"she_public", keys.she.pk->fingerprint()}, {"dgk_public", keys.dgk.pk->fingerprint()}, {"holds", held}});
  }

  std::vector<GridPoint> history = cfg.random_history ? draw_random_history(cfg, history_rng) : cfg.history;

  tr.view.mode = cfg.mode;
  tr.view.t = cfg.t;
  tr.view.l = l;
  tr.view.k_sec = cfg.k_sec;
  tr.view.k_nn = cfg.k_nn;
  tr.view.m = m;
  tr.view.mask_range = cfg.mask_range;
  tr.view.signed_mask = cfg.signed_mask;
  tr.view.leak_z = cfg.leak_z;
  tr.view.random_history = cfg.random_history;
  tr.view.pois = cfg.pois;
  if (!cfg.random_history) tr.view.known_history = history;
  tr.view.she_plain_modulus = p;
  tr.view.dgk_u = keys.dgk.pk->u();
  tr.view.key_fingerprint = keys.fingerprint();

  // --- User -> EN ---
  UserQuery query = user_create_query(cfg.user_location, cfg.query_text, keys, cfg.world_diameter, user_rng);
  log.send(Entity::user, Entity::edge_node, "query",
           {{"sealed_query", {{"body", query.sealed_query.body_hex}, {"tag", query.sealed_query.tag}}},
            {"x", query.location.x.to_hex()},
            {"y", query.location.y.to_hex()}});

  // Historical locations reach EN as earlier users' ciphertexts.
  std::vector<EncryptedPoint> enc_history;
  for (const auto& h : history) enc_history.push_back(encrypt_point(keys.she.pk, h, user_rng));
  EncryptedPoint scaled_virtual = en_virtual_location(query.location, enc_history, cfg.t);

  // --- EN -> LBS: relay the sealed query ---
  log.send(Entity::edge_node, Entity::lbs, "relay_query",
           {{"sealed_query", {{"body", query.sealed_query.body_hex}, {"tag", query.sealed_query.tag}}}});
  std::string query_text = open(keys.query_key, query.sealed_query);

  // --- LBS -> EN: encrypted, t-scaled POIs ---
  std::vector<EncryptedPoint> enc_pois;
  Json poi_blobs = Json::array();
  for (const auto& poi : cfg.pois) {
    GridPoint scaled{poi.x * cfg.t, poi.y * cfg.t};
    enc_pois.push_back(encrypt_point(keys.she.pk, scaled, lbs_rng));
    poi_blobs.push_back({enc_pois.back().x.to_hex(), enc_pois.back().y.to_hex()});
  }
  log.send(Entity::lbs, Entity::edge_node, "poi_ciphertexts", {{"query", query_text}, {"pois", poi_blobs}});

  std::vector<she::Ciphertext> enc_dist = en_compute_distances(scaled_virtual, enc_pois);

  // --- Ground truth ---
  GridPoint truth_t{cfg.user_location.x, cfg.user_location.y};
  for (const auto& h : history) {
    truth_t.x += h.x;
    truth_t.y += h.y;
  }
  tr.sidecar.user_location = cfg.user_location;
  tr.sidecar.history = history;
  tr.sidecar.tx = truth_t.x;
  tr.sidecar.ty = truth_t.y;
  for (const auto& poi : cfg.pois) {
    tr.sidecar.distances.push_back(squared_distance(truth_t, GridPoint{poi.x * cfg.t, poi.y * cfg.t}));
  }
  tr.sidecar.brute_force_order = brute_force_order(tr.sidecar.distances);

  // --- Pairwise comparisons ---
  DecisionMatrix decisions;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      ComparisonTranscript ct;
      ct.a = a;
      ct.b = b;
      ct.d_a = tr.sidecar.distances[a];
      ct.d_b = tr.sidecar.distances[b];
      ct.truth = ct.d_a >= ct.d_b;

      if (cfg.mode == Mode::masked) {
        MaskedDifference md = en_mask_difference(enc_dist[a], enc_dist[b], cfg.mask_range, cfg.signed_mask, en_rng);
        ct.mask = md.mask;
        ct.z = (ct.d_a - ct.d_b) * md.mask;
        log.send(Entity::edge_node, Entity::lbs, "masked_difference",
                 {{"pair", {a, b}}, {"z", md.z.to_hex()}});
        ct.lbs_z = numkit::centered(she::decrypt(*keys.she.sk, md.z), p);
        ct.decision = *ct.lbs_z >= 0;
      } else {
        PreparedComparison prep = en_compare_prepare(enc_dist[a], enc_dist[b], l, cfg.k_sec, m, en_rng);
        ct.z = numkit::pow2(l) + ct.d_a - ct.d_b;
        ct.rho = prep.rho;
        ct.rhobar = numkit::mod_reduce(prep.rho, l);
        Json body = {{"pair", {a, b}}, {"w", prep.w.to_hex()}};
        if (cfg.leak_z) body["z"] = prep.z.to_hex();
        log.send(Entity::edge_node, Entity::lbs, "compare_w", body);
        if (cfg.leak_z) ct.lbs_z = she::decrypt(*keys.she.sk, prep.z);

        if (cfg.mode == Mode::oracle) {
          ct.w = she::decrypt(*keys.she.sk, prep.w);
          ct.wbar = numkit::mod_reduce(ct.w, l);
          ct.decision = ct.truth;
        } else {
          ReducedW red = lbs_reduce_w(prep.w, *keys.she.sk, keys.dgk.pk, l, lbs_rng);
          ct.w = red.w;
          ct.wbar = red.wbar;
          log.send(Entity::lbs, Entity::edge_node, "wbar_bits", {{"pair", {a, b}}, {"bits", blob_list(red.bits)}});

          ct.epsilon = numkit::rand_u64_below(en_rng, 2) == 0 ? -1 : 1;
          BlindedComparison blind = en_dgk_combine(red.bits, ct.rhobar, ct.epsilon, en_rng);
          ct.xi = blind.xi;
          if (keys.dgk.pk->backend() == dgk::Backend::transparent) {
            ct.c_plain = dgk_chain_plaintexts(ct.wbar, ct.rhobar, l, ct.epsilon, keys.dgk.pk->u());
          }
          log.send(Entity::edge_node, Entity::lbs, "blinded_bits",
                   {{"pair", {a, b}}, {"bits", blob_list(blind.blinded)}});
          ct.decision = lbs_decide(blind.blinded, *keys.dgk.sk);
        }
      }
      decisions[{a, b}] = ct.decision;
      tr.comparisons.push_back(std::move(ct));
    }
  }

  // --- LBS -> EN -> User ---
  tr.response = lbs_rank_and_respond(decisions, cfg.k_nn, cfg.pois, keys.response_key, lbs_rng);
  Json sealed = {{"body", tr.response.sealed.body_hex}, {"tag", tr.response.sealed.tag}};
  log.send(Entity::lbs, Entity::edge_node, "response", {{"sealed_response", sealed}});
  log.send(Entity::edge_node, Entity::user, "response_relay", {{"sealed_response", sealed}});

  std::string delivered = open(keys.response_key, tr.response.sealed);
  std::size_t pos = 0;
  while (pos < delivered.size()) {
    std::size_t colon = delivered.find(':', pos);
    std::size_t semi = delivered.find(';', pos);
    tr.delivered.push_back(std::stoul(delivered.substr(pos, colon - pos)));
    pos = semi + 1;
  }
  return tr;
}

}  // namespace lbscrypt::protocol
