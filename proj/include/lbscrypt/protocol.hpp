#pragma once

#include "lbscrypt/dgk.hpp"
#include "lbscrypt/numkit.hpp"
#include "lbscrypt/she.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// The four entities (User, Edge Node, LBS, CA) and the full query flow.
//
// Coordinates are kept in integers end to end: instead of dividing the
// moving average by t, the Edge Node works with T = t * (virtual location)
// and the LBS scales its POIs by t, so every squared distance is t^2 times
// the true one. Orderings, and therefore k-NN answers, are unchanged.
namespace lbscrypt::protocol {

struct GridPoint {
  BigInt x;
  BigInt y;

  friend bool operator==(const GridPoint& a, const GridPoint& b) { return a.x == b.x && a.y == b.y; }
};

BigInt squared_distance(const GridPoint& a, const GridPoint& b);

enum class Mode { oracle, faithful, masked };

const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);

enum class Entity { user, edge_node, lbs, ca };

const char* to_string(Entity e);

struct ScenarioConfig {
  GridPoint user_location;
  std::vector<GridPoint> history;  // t - 1 previous locations, most recent first
  std::vector<GridPoint> pois;
  unsigned t = 2;
  unsigned k_sec = 40;
  BigInt world_diameter;
  unsigned k_nn = 1;
  std::uint64_t seed = 0;
  Mode mode = Mode::oracle;
  BigInt mask_range = 0;  // masked mode: R uniform in [1, mask_range]
  bool signed_mask = false;
  bool random_history = false;
  // faithful/oracle: EN also hands LBS the SHE encryption of z (the
  // "just reveal z" repair), which LBS decrypts.
  bool leak_z = false;
  she::Backend she_backend = she::Backend::transparent;
  she::SecurityLevel she_level = she::SecurityLevel::toy;
  dgk::Backend dgk_backend = dgk::Backend::transparent;
  unsigned dgk_bits = 512;
  std::string query_text = "nearest points of interest";
};

/// Throws ValidationError whose message starts with the offending field name.
void validate(const ScenarioConfig& cfg);

/// m = (t * D)^2, the bound on every scaled squared distance.
BigInt distance_bound(const ScenarioConfig& cfg);

/// l = max(1, ceil(log2(m + 1))), so that 2^l > m.
unsigned comparison_bits(const BigInt& m);

// ---------------------------------------------------------------------------
// Keys
// ---------------------------------------------------------------------------

struct SealingKey {
  std::uint64_t secret = 0;
};

/// Opaque authenticated envelope standing in for the conventional
/// encryption of the query text and of the response.
struct Envelope {
  std::string body_hex;
  std::string tag;
};

Envelope seal(const SealingKey& key, const std::string& plaintext, numkit::SeededRng& rng);
/// Throws CryptoError on a tag mismatch.
std::string open(const SealingKey& key, const Envelope& env);

struct KeyRing {
  she::Keypair she;
  dgk::Keypair dgk;
  SealingKey query_key;     // user seals, LBS opens
  SealingKey response_key;  // LBS seals, user opens
  std::map<std::string, std::vector<Entity>> holders;  // key half -> entities holding it

  std::string fingerprint() const;
};

KeyRing ca_setup(const ScenarioConfig& cfg, numkit::SeededRng& rng);

// ---------------------------------------------------------------------------
// Entity operations
// ---------------------------------------------------------------------------

struct EncryptedPoint {
  she::Ciphertext x;
  she::Ciphertext y;
};

struct UserQuery {
  Envelope sealed_query;
  EncryptedPoint location;
};

/// Encodes a signed coordinate as a residue mod p.
BigInt encode_signed(const BigInt& v, const BigInt& p);

UserQuery user_create_query(const GridPoint& location, const std::string& query_text, const KeyRing& keys,
                            const BigInt& world_bound, numkit::SeededRng& rng);

EncryptedPoint encrypt_point(const std::shared_ptr<const she::PublicKey>& pk, const GridPoint& p,
                             numkit::SeededRng& rng);

/// T = user + sum(history): t times the virtual location, no division.
EncryptedPoint en_virtual_location(const EncryptedPoint& user, const std::vector<EncryptedPoint>& history,
                                   unsigned t);

/// d_i = (T_x - t*x_i)^2 + (T_y - t*y_i)^2 for POIs already scaled by t.
std::vector<she::Ciphertext> en_compute_distances(const EncryptedPoint& scaled_virtual,
                                                  const std::vector<EncryptedPoint>& scaled_pois);

struct PreparedComparison {
  she::Ciphertext z;  // kept by EN; released only in the z-leak variant
  she::Ciphertext w;  // sent to LBS
  BigInt rho;         // EN secret
};

/// z = 2^l + d_a - d_b,  w = z + rho,  rho uniform in [0, 2^(k_sec + l + 1)).
PreparedComparison en_compare_prepare(const she::Ciphertext& d_a, const she::Ciphertext& d_b, unsigned l,
                                      unsigned k_sec, const BigInt& m, numkit::SeededRng& rng);

struct ReducedW {
  BigInt w;
  BigInt wbar;
  std::vector<dgk::Ciphertext> bits;  // bits[j] encrypts bit j of wbar (LSB first)
};

ReducedW lbs_reduce_w(const she::Ciphertext& w, const she::SecretKey& sk,
                      const std::shared_ptr<const dgk::PublicKey>& dgk_pk, unsigned l, numkit::SeededRng& rng);

struct BlindedComparison {
  std::vector<dgk::Ciphertext> blinded;  // shuffled
  std::vector<BigInt> xi;                // blinding factor per j, before shuffling
  std::vector<std::size_t> order;        // blinded[i] came from c_{order[i]}
  int epsilon = 1;
};

/// c_j = wbar_j - rhobar_j + epsilon + 3 * sum_{v > j} (wbar_v XOR rhobar_v)  (mod u),
/// each blinded by a random xi_j in [1, u-1], then shuffled.
BlindedComparison en_dgk_combine(const std::vector<dgk::Ciphertext>& wbar_bits, const BigInt& rhobar, int epsilon,
                                 numkit::SeededRng& rng);

/// Plaintext reference for c_j; transparent transcripts record it for debugging.
std::vector<BigInt> dgk_chain_plaintexts(const BigInt& wbar, const BigInt& rhobar, unsigned l, int epsilon,
                                         const BigInt& u);

/// True iff some blinded value decrypts to zero, read as "d_a >= d_b".
bool lbs_decide(const std::vector<dgk::Ciphertext>& blinded, const dgk::SecretKey& sk);

/// decisions[{a, b}] for a < b: true means "d_a >= d_b".
using DecisionMatrix = std::map<std::pair<std::size_t, std::size_t>, bool>;

/// Copeland ranking: wins = number of pairs in which the POI was decided
/// the smaller; ties broken by ascending index. Throws on missing pairs.
std::vector<std::size_t> rank_by_wins(std::size_t n, const DecisionMatrix& decisions);

struct QueryResponse {
  std::vector<std::size_t> indices;
  std::vector<GridPoint> points;
  Envelope sealed;
};

QueryResponse lbs_rank_and_respond(const DecisionMatrix& decisions, std::size_t k_nn,
                                   const std::vector<GridPoint>& pois, const SealingKey& key,
                                   numkit::SeededRng& rng);

struct MaskedDifference {
  she::Ciphertext z;
  BigInt mask;  // R, EN secret
};

/// z = (d_a - d_b) * R with R uniform in [1, mask_range] (or +-R if signed).
MaskedDifference en_mask_difference(const she::Ciphertext& d_a, const she::Ciphertext& d_b, const BigInt& mask_range,
                                    bool signed_mask, numkit::SeededRng& rng);

// ---------------------------------------------------------------------------
// End-to-end run
// ---------------------------------------------------------------------------

struct Message {
  std::size_t seq = 0;
  Entity from = Entity::ca;
  Entity to = Entity::ca;
  std::string kind;
  nlohmann::ordered_json body;
};

struct ComparisonTranscript {
  std::size_t a = 0;
  std::size_t b = 0;
  // ground truth
  BigInt d_a;
  BigInt d_b;
  bool truth = false;  // d_a >= d_b
  // Edge Node view
  BigInt z;
  BigInt rho;
  BigInt rhobar;
  int epsilon = 0;
  std::vector<BigInt> xi;
  BigInt mask;
  // LBS view
  BigInt w;
  BigInt wbar;
  std::optional<BigInt> lbs_z;  // decrypted z (z-leak or masked)
  std::vector<BigInt> c_plain;  // transparent DGK only
  bool decision = false;        // what the ranking used
};

/// What the LBS legitimately knows besides the per-pair views.
struct PublicView {
  Mode mode = Mode::oracle;
  unsigned t = 0;
  unsigned l = 0;
  unsigned k_sec = 0;
  unsigned k_nn = 0;
  BigInt m;
  BigInt mask_range;
  bool signed_mask = false;
  bool leak_z = false;
  bool random_history = false;
  std::vector<GridPoint> pois;
  // Historical locations as known to the LBS from earlier queries; empty
  // when the history was randomly initialised.
  std::vector<GridPoint> known_history;
  BigInt she_plain_modulus;
  BigInt dgk_u;
  std::string key_fingerprint;
};

/// Simulator-only record used to validate attacks.
struct GroundTruth {
  GridPoint user_location;
  std::vector<GridPoint> history;
  BigInt tx;
  BigInt ty;
  std::vector<BigInt> distances;  // scaled by t^2
  std::vector<std::size_t> brute_force_order;
};

struct QueryTranscript {
  PublicView view;
  std::vector<Message> messages;
  std::vector<ComparisonTranscript> comparisons;
  QueryResponse response;
  std::vector<std::size_t> delivered;  // indices the user unsealed
  GroundTruth sidecar;
};

QueryTranscript run_full_query(const ScenarioConfig& cfg);

/// Indices sorted by (distance, index).
std::vector<std::size_t> brute_force_order(const std::vector<BigInt>& distances);

}  // namespace lbscrypt::protocol
