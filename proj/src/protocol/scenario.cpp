#include "fingerprint.hpp"
#include "lbscrypt/errors.hpp"
#include "lbscrypt/protocol.hpp"

#include <algorithm>
#include <cstdio>

namespace lbscrypt::protocol {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ValidationError(field + ": " + what);
}

std::uint64_t keystream_seed(const SealingKey& key, std::uint64_t nonce) { return key.secret ^ (nonce * 0x9e3779b97f4a7c15ULL); }

std::string envelope_tag(const SealingKey& key, std::uint64_t nonce, const std::string& plaintext) {
  char head[40];
  std::snprintf(head, sizeof(head), "%016llx%016llx", static_cast<unsigned long long>(key.secret),
                static_cast<unsigned long long>(nonce));
  return lbscrypt::detail::fnv1a_hex(std::string(head) + plaintext);
}

}  // namespace

BigInt squared_distance(const GridPoint& a, const GridPoint& b) {
  BigInt dx = a.x - b.x;
  BigInt dy = a.y - b.y;
  return dx * dx + dy * dy;
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::oracle:
      return "oracle";
    case Mode::faithful:
      return "faithful";
    case Mode::masked:
      return "masked";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "oracle") return Mode::oracle;
  if (s == "faithful") return Mode::faithful;
  if (s == "masked") return Mode::masked;
  throw ValidationError("mode: expected oracle|faithful|masked, got '" + s + "'");
}

const char* to_string(Entity e) {
  switch (e) {
    case Entity::user:
      return "user";
    case Entity::edge_node:
      return "edge_node";
    case Entity::lbs:
      return "lbs";
    case Entity::ca:
      return "ca";
  }
  return "?";
}

void validate(const ScenarioConfig& cfg) {
  require(cfg.t >= 2, "t", "must be >= 2");
  require(cfg.pois.size() >= 3, "pois", "need at least 3 points of interest");
  require(cfg.k_nn >= 1 && cfg.k_nn <= cfg.pois.size(), "k_nn", "must be in [1, number of pois]");
  require(cfg.k_sec >= 1, "k_sec", "must be >= 1");
  require(cfg.world_diameter >= 1, "world_diameter", "must be >= 1");
  if (!cfg.random_history) {
    require(cfg.history.size() == cfg.t - 1, "history", "length must equal t - 1 (" + std::to_string(cfg.t - 1) + ")");
  } else {
    require(cfg.history.empty() || cfg.history.size() == cfg.t - 1, "history",
            "length must be 0 or t - 1 when random_history is set");
  }
  if (cfg.mode == Mode::masked) {
    require(cfg.mask_range >= 1, "mask_range", "masked mode needs mask_range >= 1");
    require(!cfg.leak_z, "leak_z", "not meaningful in masked mode");
  }
  if (cfg.dgk_backend == dgk::Backend::group) require(cfg.dgk_bits >= 256, "dgk_bits", "must be >= 256");

  const BigInt& d = cfg.world_diameter;
  auto in_bound = [&](const GridPoint& p, const std::string& field) {
    require(abs(p.x) <= d && abs(p.y) <= d, field,
            "coordinate outside the world bound |x|,|y| <= " + numkit::to_dec(d));
  };
  in_bound(cfg.user_location, "user_location");
  for (const auto& p : cfg.history) in_bound(p, "history");
  for (const auto& p : cfg.pois) in_bound(p, "pois");

  // Every scaled squared distance must stay below m = (tD)^2; it suffices
  // that all points lie within pairwise distance D (the virtual location is
  // a convex combination).
  std::vector<const GridPoint*> all{&cfg.user_location};
  for (const auto& p : cfg.history) all.push_back(&p);
  for (const auto& p : cfg.pois) all.push_back(&p);
  const BigInt d2 = d * d;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      require(squared_distance(*all[i], *all[j]) <= d2, "world_diameter",
              "points are farther apart than the world diameter");
    }
  }
}

BigInt distance_bound(const ScenarioConfig& cfg) {
  BigInt td = cfg.world_diameter * cfg.t;
  return td * td;
}

unsigned comparison_bits(const BigInt& m) { return std::max(1u, numkit::ceil_log2_plus_one(m)); }

Envelope seal(const SealingKey& key, const std::string& plaintext, numkit::SeededRng& rng) {
  std::uint64_t nonce = rng.next_u64();
  numkit::SeededRng stream(keystream_seed(key, nonce));
  std::string hex;
  char buf[3];
  for (unsigned char c : plaintext) {
    auto k = static_cast<unsigned char>(stream.next_u64() & 0xff);
    std::snprintf(buf, sizeof(buf), "%02x", static_cast<unsigned>(c ^ k));
    hex += buf;
  }
  char nonce_hex[17];
  std::snprintf(nonce_hex, sizeof(nonce_hex), "%016llx", static_cast<unsigned long long>(nonce));
  return {std::string(nonce_hex) + hex, envelope_tag(key, nonce, plaintext)};
}

std::string open(const SealingKey& key, const Envelope& env) {
  if (env.body_hex.size() < 16 || env.body_hex.size() % 2 != 0) throw CryptoError("malformed envelope");
  std::uint64_t nonce = std::stoull(env.body_hex.substr(0, 16), nullptr, 16);
  numkit::SeededRng stream(keystream_seed(key, nonce));
  std::string out;
  for (std::size_t i = 16; i < env.body_hex.size(); i += 2) {
    auto c = static_cast<unsigned char>(std::stoul(env.body_hex.substr(i, 2), nullptr, 16));
    auto k = static_cast<unsigned char>(stream.next_u64() & 0xff);
    out.push_back(static_cast<char>(c ^ k));
  }
  if (envelope_tag(key, nonce, out) != env.tag) throw CryptoError("envelope authentication failed");
  return out;
}

std::string KeyRing::fingerprint() const {
  std::string all = she.pk->fingerprint() + dgk.pk->fingerprint();
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%016llx%016llx", static_cast<unsigned long long>(query_key.secret),
                static_cast<unsigned long long>(response_key.secret));
  return lbscrypt::detail::fnv1a_hex(all + buf);
}

KeyRing ca_setup(const ScenarioConfig& cfg, numkit::SeededRng& rng) {
  validate(cfg);
  const BigInt m = distance_bound(cfg);
  const unsigned l = comparison_bits(m);

  // p > 2^(k + l + 4) keeps w = z + rho from wrapping; masked mode also
  // needs |(d_a - d_b) * R| < p / 2.
  unsigned p_bits = cfg.k_sec + l + 4;
  if (cfg.mode == Mode::masked) p_bits = std::max(p_bits, l + numkit::bit_length(cfg.mask_range) + 2);

  she::SheParams params;
  params.plain_modulus = numkit::next_prime(numkit::pow2(p_bits));
  params.level = cfg.she_level;
  params.max_depth = 2;
  params.backend = cfg.she_backend;

  KeyRing keys;
  keys.she = she::keygen(params, rng);
  keys.dgk = dgk::keygen(cfg.dgk_backend, cfg.dgk_bits, numkit::next_prime(BigInt(3 * l + 3)), rng);
  keys.query_key.secret = rng.next_u64();
  keys.response_key.secret = rng.next_u64();

  // One SHE keypair for all location arithmetic, secret half at the LBS
  // (the LBS must decrypt w).
  keys.holders = {
      {"she.public", {Entity::user, Entity::edge_node, Entity::lbs}},
      {"she.secret", {Entity::lbs}},
      {"dgk.public", {Entity::edge_node, Entity::lbs}},
      {"dgk.secret", {Entity::lbs}},
      {"query.seal", {Entity::user}},
      {"query.open", {Entity::lbs}},
      {"response.seal", {Entity::lbs}},
      {"response.open", {Entity::user}},
  };
  return keys;
}

}  // namespace lbscrypt::protocol
