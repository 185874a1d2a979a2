#include "lbscrypt/errors.hpp"
#include "lbscrypt/protocol.hpp"

#include <algorithm>
#include <numeric>

namespace lbscrypt::protocol {

BigInt encode_signed(const BigInt& v, const BigInt& p) { return numkit::mod_floor(v, p); }

EncryptedPoint encrypt_point(const std::shared_ptr<const she::PublicKey>& pk, const GridPoint& p,
                             numkit::SeededRng& rng) {
  const BigInt& mod = pk->plain_modulus();
  return {she::encrypt(pk, encode_signed(p.x, mod), rng), she::encrypt(pk, encode_signed(p.y, mod), rng)};
}

UserQuery user_create_query(const GridPoint& location, const std::string& query_text, const KeyRing& keys,
                            const BigInt& world_bound, numkit::SeededRng& rng) {
  if (abs(location.x) > world_bound || abs(location.y) > world_bound) {
    throw ValidationError("user_location: outside the world bound");
  }
  UserQuery q;
  q.sealed_query = seal(keys.query_key, query_text, rng);
  q.location = encrypt_point(keys.she.pk, location, rng);
  return q;
}

EncryptedPoint en_virtual_location(const EncryptedPoint& user, const std::vector<EncryptedPoint>& history,
                                   unsigned t) {
  if (t < 2) throw ValidationError("t: moving average needs t >= 2");
  if (history.size() != t - 1) {
    throw ValidationError("history: expected " + std::to_string(t - 1) + " entries, got " +
                          std::to_string(history.size()));
  }
  EncryptedPoint sum = user;
  for (const auto& h : history) {
    sum.x = she::add(sum.x, h.x);
    sum.y = she::add(sum.y, h.y);
  }
  return sum;
}

std::vector<she::Ciphertext> en_compute_distances(const EncryptedPoint& scaled_virtual,
                                                  const std::vector<EncryptedPoint>& scaled_pois) {
  std::vector<she::Ciphertext> out;
  out.reserve(scaled_pois.size());
  for (const auto& poi : scaled_pois) {
    she::Ciphertext dx = she::sub(scaled_virtual.x, poi.x);
    she::Ciphertext dy = she::sub(scaled_virtual.y, poi.y);
    out.push_back(she::add(she::mul(dx, dx), she::mul(dy, dy)));
  }
  return out;
}

PreparedComparison en_compare_prepare(const she::Ciphertext& d_a, const she::Ciphertext& d_b, unsigned l,
                                      unsigned k_sec, const BigInt& m, numkit::SeededRng& rng) {
  if (numkit::pow2(l) <= m) {
    throw ValidationError("l: 2^" + std::to_string(l) + " must exceed the distance bound m = " + numkit::to_dec(m));
  }
  PreparedComparison out;
  // [z] = [2^l] + [d_a] + [-d_b]
  out.z = she::add_plain(she::add(d_a, she::negate(d_b)), numkit::pow2(l));
  out.rho = numkit::rand_bits(rng, k_sec + l + 1);
  out.w = she::add(out.z, she::encrypt(out.z.key(), out.rho, rng));
  return out;
}

ReducedW lbs_reduce_w(const she::Ciphertext& w, const she::SecretKey& sk,
                      const std::shared_ptr<const dgk::PublicKey>& dgk_pk, unsigned l, numkit::SeededRng& rng) {
  ReducedW out;
  out.w = she::decrypt(sk, w);
  out.wbar = numkit::mod_reduce(out.w, l);
  out.bits.reserve(l);
  for (unsigned j = 0; j < l; ++j) {
    out.bits.push_back(dgk::encrypt(dgk_pk, numkit::bit(out.wbar, j) ? 1 : 0, rng));
  }
  return out;
}

std::vector<BigInt> dgk_chain_plaintexts(const BigInt& wbar, const BigInt& rhobar, unsigned l, int epsilon,
                                         const BigInt& u) {
  std::vector<BigInt> c(l);
  long xor_sum = 0;
  for (unsigned jj = l; jj-- > 0;) {
    long wb = numkit::bit(wbar, jj) ? 1 : 0;
    long rb = numkit::bit(rhobar, jj) ? 1 : 0;
    c[jj] = numkit::mod_floor(BigInt(wb - rb + epsilon + 3 * xor_sum), u);
    xor_sum += wb ^ rb;
  }
  return c;
}

BlindedComparison en_dgk_combine(const std::vector<dgk::Ciphertext>& wbar_bits, const BigInt& rhobar, int epsilon,
                                 numkit::SeededRng& rng) {
  if (epsilon != 1 && epsilon != -1) throw ValidationError("epsilon must be +1 or -1");
  const std::size_t l = wbar_bits.size();
  if (l == 0) throw ValidationError("en_dgk_combine: empty bit vector");
  if (numkit::bit_length(rhobar) > l) throw ValidationError("en_dgk_combine: rhobar has more than l bits");
  const auto& pk = wbar_bits.front().key();
  const BigInt& u = pk->u();

  // [wbar_v XOR rhobar_v] with rhobar_v known in clear.
  std::vector<dgk::Ciphertext> xors;
  xors.reserve(l);
  for (std::size_t v = 0; v < l; ++v) {
    xors.push_back(numkit::bit(rhobar, static_cast<unsigned>(v)) ? dgk::flip_bit(wbar_bits[v], rng) : wbar_bits[v]);
  }

  BlindedComparison out;
  out.epsilon = epsilon;
  std::vector<dgk::Ciphertext> chain(l);
  std::optional<dgk::Ciphertext> suffix;  // sum_{v > j} xor_v
  for (std::size_t jj = l; jj-- > 0;) {
    long rb = numkit::bit(rhobar, static_cast<unsigned>(jj)) ? 1 : 0;
    BigInt offset = numkit::mod_floor(BigInt(epsilon - rb), u);
    dgk::Ciphertext c = dgk::combine(wbar_bits[jj], dgk::encrypt(pk, offset, rng));
    if (suffix) c = dgk::combine(c, dgk::scale(*suffix, 3));
    chain[jj] = std::move(c);
    suffix = suffix ? dgk::combine(*suffix, xors[jj]) : xors[jj];
  }

  out.xi.resize(l);
  std::vector<dgk::Ciphertext> blinded(l);
  for (std::size_t j = 0; j < l; ++j) {
    out.xi[j] = numkit::rand_range(rng, 1, u - 1);
    blinded[j] = dgk::scale(chain[j], out.xi[j]);
  }
  out.order.resize(l);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  numkit::shuffle(out.order, rng);
  out.blinded.reserve(l);
  for (std::size_t i : out.order) out.blinded.push_back(blinded[i]);
  return out;
}

bool lbs_decide(const std::vector<dgk::Ciphertext>& blinded, const dgk::SecretKey& sk) {
  return std::any_of(blinded.begin(), blinded.end(), [&](const dgk::Ciphertext& c) { return dgk::is_zero(sk, c); });
}

std::vector<std::size_t> rank_by_wins(std::size_t n, const DecisionMatrix& decisions) {
  std::vector<std::size_t> wins(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      auto it = decisions.find({a, b});
      if (it == decisions.end()) {
        throw ValidationError("decisions: missing pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
      }
      // true: d_a >= d_b, so b is the nearer one
      ++wins[it->second ? b : a];
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return wins[x] > wins[y]; });
  return order;
}

QueryResponse lbs_rank_and_respond(const DecisionMatrix& decisions, std::size_t k_nn,
                                   const std::vector<GridPoint>& pois, const SealingKey& key,
                                   numkit::SeededRng& rng) {
  if (k_nn == 0 || k_nn > pois.size()) throw ValidationError("k_nn: must be in [1, number of pois]");
  std::vector<std::size_t> order = rank_by_wins(pois.size(), decisions);
  QueryResponse resp;
  std::string body;
  for (std::size_t i = 0; i < k_nn; ++i) {
    resp.indices.push_back(order[i]);
    resp.points.push_back(pois[order[i]]);
    body += std::to_string(order[i]) + ":" + numkit::to_dec(pois[order[i]].x) + "," +
            numkit::to_dec(pois[order[i]].y) + ";";
  }
  resp.sealed = seal(key, body, rng);
  return resp;
}

MaskedDifference en_mask_difference(const she::Ciphertext& d_a, const she::Ciphertext& d_b, const BigInt& mask_range,
                                    bool signed_mask, numkit::SeededRng& rng) {
  if (mask_range < 1) throw ValidationError("mask_range: must be >= 1");
  MaskedDifference out;
  out.mask = numkit::rand_range(rng, 1, mask_range);
  if (signed_mask && numkit::rand_u64_below(rng, 2) == 1) out.mask = -out.mask;
  const auto& pk = d_a.key();
  she::Ciphertext r = she::encrypt(pk, encode_signed(out.mask, pk->plain_modulus()), rng);
  out.z = she::mul(she::sub(d_a, d_b), r);
  return out;
}

std::vector<std::size_t> brute_force_order(const std::vector<BigInt>& distances) {
  std::vector<std::size_t> order(distances.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return distances[a] < distances[b]; });
  return order;
}

}  // namespace lbscrypt::protocol
