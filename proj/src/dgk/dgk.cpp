#include "lbscrypt/dgk.hpp"

#include "fingerprint.hpp"
#include "lbscrypt/detail/dgk_debug.hpp"
#include "lbscrypt/errors.hpp"

#include <cstdio>

namespace lbscrypt::dgk {

namespace {

BigInt powm(const BigInt& base, const BigInt& exp, const BigInt& mod) {
  BigInt r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return r;
}

BigInt invert(const BigInt& a, const BigInt& mod) {
  BigInt r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t()) == 0) {
    throw CryptoError("DGK ciphertext is not invertible");
  }
  return r;
}

// p = 2*u*v*f + 1 with exactly `bits` bits.
BigInt find_prime(const BigInt& u, const BigInt& v, unsigned bits, numkit::SeededRng& rng) {
  const BigInt base = 2 * u * v;
  const unsigned base_bits = numkit::bit_length(base);
  if (bits <= base_bits + 8) throw ValidationError("DGK modulus too small for the chosen u");
  const unsigned f_bits = bits - base_bits;
  for (;;) {
    BigInt f = numkit::rand_bits(rng, f_bits) | numkit::pow2(f_bits - 1);
    BigInt p = base * f + 1;
    if (numkit::bit_length(p) != bits) continue;
    if (numkit::is_prime(p)) return p;
  }
}

// Element of order exactly u*v modulo p, and one of order exactly v.
std::pair<BigInt, BigInt> generators(const BigInt& p, const BigInt& u, const BigInt& v, numkit::SeededRng& rng) {
  const BigInt p1 = p - 1;
  BigInt g;
  for (;;) {
    BigInt x = numkit::rand_range(rng, 2, p - 2);
    g = powm(x, p1 / (u * v), p);
    if (powm(g, v, p) != 1 && powm(g, u, p) != 1) break;
  }
  BigInt h;
  for (;;) {
    BigInt y = numkit::rand_range(rng, 2, p - 2);
    h = powm(y, p1 / v, p);
    if (h != 1) break;
  }
  return {g, h};
}

BigInt crt(const BigInt& ap, const BigInt& p, const BigInt& aq, const BigInt& q) {
  BigInt n = p * q;
  BigInt r = ap * q * invert(q, p) + aq * p * invert(p, q);
  return numkit::mod_floor(r, n);
}

std::uint64_t mix_nonce(std::uint64_t a, std::uint64_t b) { return a ^ ((b << 17) | (b >> 47)) ^ 0x9e3779b97f4a7c15ULL; }

}  // namespace

const char* to_string(Backend b) { return b == Backend::transparent ? "transparent" : "group"; }

Backend backend_from_string(const std::string& s) {
  if (s == "transparent") return Backend::transparent;
  if (s == "group" || s == "real") return Backend::group;
  throw ValidationError("unknown DGK backend '" + s + "'");
}

std::string PublicKey::to_hex() const {
  if (!group_) return "dgk1t-pk:" + u_.get_str(16) + ":" + tag_;
  return "dgk1g-pk:" + u_.get_str(16) + ":" + group_->n.get_str(16) + ":" + group_->g.get_str(16) + ":" +
         group_->h.get_str(16);
}

struct Factory {
  static Keypair keygen(Backend backend, unsigned bits, const BigInt& u, numkit::SeededRng& rng) {
    if (u < 2 || !numkit::is_prime(u)) throw ValidationError("DGK plaintext space u must be prime");
    auto pk = std::make_shared<PublicKey>();
    auto sk = std::make_shared<SecretKey>();
    pk->u_ = u;
    pk->backend_ = backend;

    if (backend == Backend::transparent) {
      pk->tag_ = numkit::rand_bits(rng, 64).get_str(16);
    } else {
      if (bits < 256) throw ValidationError("DGK modulus must be at least 256 bits");
      const unsigned half = bits / 2;
      const unsigned t = std::min(160u, bits / 4);
      BigInt vp = numkit::next_prime(numkit::rand_bits(rng, t) | numkit::pow2(t - 1));
      BigInt vq;
      do {
        vq = numkit::next_prime(numkit::rand_bits(rng, t) | numkit::pow2(t - 1));
      } while (vq == vp);
      BigInt p = find_prime(u, vp, half, rng);
      BigInt q;
      do {
        q = find_prime(u, vq, half, rng);
      } while (q == p);
      auto [gp, hp] = generators(p, u, vp, rng);
      auto [gq, hq] = generators(q, u, vq, rng);

      auto pub = std::make_shared<GroupPublic>();
      pub->n = p * q;
      pub->g = crt(gp, p, gq, q);
      pub->h = crt(hp, p, hq, q);
      pub->r_bits = t * 5 / 2;
      auto sec = std::make_shared<GroupSecret>();
      sec->p = p;
      sec->vp = vp;
      sec->g_vp = powm(pub->g, vp, p);
      pk->group_ = pub;
      sk->group_ = sec;
    }
    pk->fingerprint_ = lbscrypt::detail::fnv1a_hex(pk->to_hex());
    sk->fingerprint_ = pk->fingerprint_;
    return {pk, sk};
  }

  static Ciphertext make(const std::shared_ptr<const PublicKey>& key, std::variant<TransparentPayload, BigInt> body) {
    Ciphertext ct;
    ct.key_ = key;
    ct.payload_ = std::move(body);
    return ct;
  }

  static const std::shared_ptr<const PublicKey>& same_key(const Ciphertext& a, const Ciphertext& b) {
    if (a.empty() || b.empty()) throw ValidationError("operation on an empty DGK ciphertext");
    if (a.key_->fingerprint() != b.key_->fingerprint()) throw KeyMismatch("DGK ciphertexts under different keys");
    return a.key_;
  }

  static Ciphertext encrypt(const std::shared_ptr<const PublicKey>& pk, const BigInt& m, numkit::SeededRng& rng) {
    if (!pk) throw ValidationError("DGK encrypt without a key");
    if (m < 0 || m >= pk->u()) throw ValidationError("DGK plaintext " + numkit::to_dec(m) + " outside [0, u)");
    if (const GroupPublic* g = pk->group()) {
      BigInt r = numkit::rand_bits(rng, g->r_bits);
      BigInt c = powm(g->g, m, g->n) * powm(g->h, r, g->n) % g->n;
      return make(pk, c);
    }
    return make(pk, TransparentPayload{m, rng.next_u64()});
  }

  static Ciphertext combine(const Ciphertext& a, const Ciphertext& b) {
    const auto& key = same_key(a, b);
    if (const GroupPublic* g = key->group()) {
      return make(key, BigInt(std::get<BigInt>(a.payload_) * std::get<BigInt>(b.payload_) % g->n));
    }
    const auto& ta = std::get<TransparentPayload>(a.payload_);
    const auto& tb = std::get<TransparentPayload>(b.payload_);
    return make(key, TransparentPayload{numkit::mod_floor(ta.value + tb.value, key->u()), mix_nonce(ta.nonce, tb.nonce)});
  }

  static Ciphertext scale(const Ciphertext& ct, const BigInt& s) {
    if (ct.empty()) throw ValidationError("operation on an empty DGK ciphertext");
    if (s < 1) throw ValidationError("DGK scale factor must be >= 1");
    const auto& key = ct.key_;
    if (const GroupPublic* g = key->group()) return make(key, powm(std::get<BigInt>(ct.payload_), s, g->n));
    const auto& t = std::get<TransparentPayload>(ct.payload_);
    return make(key, TransparentPayload{numkit::mod_floor(t.value * s, key->u()), mix_nonce(t.nonce, to_nonce(s))});
  }

  static Ciphertext negate(const Ciphertext& ct) {
    if (ct.empty()) throw ValidationError("operation on an empty DGK ciphertext");
    const auto& key = ct.key_;
    if (const GroupPublic* g = key->group()) return make(key, invert(std::get<BigInt>(ct.payload_), g->n));
    const auto& t = std::get<TransparentPayload>(ct.payload_);
    return make(key, TransparentPayload{numkit::mod_floor(-t.value, key->u()), mix_nonce(t.nonce, 1)});
  }

  static bool is_zero(const SecretKey& sk, const Ciphertext& ct) {
    if (ct.empty()) throw ValidationError("zero test of an empty DGK ciphertext");
    if (sk.fingerprint() != ct.key_->fingerprint()) throw KeyMismatch("DGK ciphertext under a different key");
    if (const GroupSecret* g = sk.group()) return powm(std::get<BigInt>(ct.payload_), g->vp, g->p) == 1;
    return std::get<TransparentPayload>(ct.payload_).value == 0;
  }

  static BigInt debug_plaintext(const SecretKey& sk, const Ciphertext& ct) {
    if (sk.fingerprint() != ct.key_->fingerprint()) throw KeyMismatch("DGK ciphertext under a different key");
    if (const GroupSecret* g = sk.group()) {
      BigInt target = powm(std::get<BigInt>(ct.payload_), g->vp, g->p);
      BigInt acc = 1;
      for (BigInt m = 0; m < ct.key_->u(); ++m) {
        if (acc == target) return m;
        acc = acc * g->g_vp % g->p;
      }
      throw CryptoError("DGK discrete log not found");
    }
    return std::get<TransparentPayload>(ct.payload_).value;
  }

  static std::string to_hex(const Ciphertext& ct) {
    if (ct.empty()) return "";
    if (const auto* t = std::get_if<TransparentPayload>(&ct.payload_)) {
      char nonce[17];
      std::snprintf(nonce, sizeof(nonce), "%016llx", static_cast<unsigned long long>(t->nonce));
      return "dgk1t:" + t->value.get_str(16) + ":" + nonce;
    }
    return "dgk1g:" + std::get<BigInt>(ct.payload_).get_str(16);
  }

  static Ciphertext from_hex(std::shared_ptr<const PublicKey> key, const std::string& blob) {
    if (!key) throw ValidationError("from_hex without a key");
    if (blob.rfind("dgk1g:", 0) == 0) {
      const GroupPublic* g = key->group();
      if (g == nullptr) throw KeyMismatch("group blob for a transparent DGK key");
      BigInt c = numkit::parse_bigint("0x" + blob.substr(6));
      if (c <= 0 || c >= g->n) throw ValidationError("DGK ciphertext outside Z_n");
      return make(key, c);
    }
    if (blob.rfind("dgk1t:", 0) == 0) {
      if (key->group() != nullptr) throw KeyMismatch("transparent blob for a group DGK key");
      std::size_t sep = blob.find(':', 6);
      if (sep == std::string::npos) throw ValidationError("malformed DGK blob");
      BigInt v = numkit::parse_bigint("0x" + blob.substr(6, sep - 6));
      if (v >= key->u()) throw ValidationError("DGK plaintext outside Z_u");
      return make(key, TransparentPayload{v, std::stoull(blob.substr(sep + 1), nullptr, 16)});
    }
    throw ValidationError("unknown DGK ciphertext format tag");
  }

  static std::uint64_t to_nonce(const BigInt& s) {
    BigInt low = numkit::mod_reduce(s, 64);
    return numkit::to_u64(low);
  }
};

Keypair keygen(Backend backend, unsigned bits, const BigInt& u, numkit::SeededRng& rng) {
  return Factory::keygen(backend, bits, u, rng);
}

Ciphertext encrypt(const std::shared_ptr<const PublicKey>& pk, const BigInt& m, numkit::SeededRng& rng) {
  return Factory::encrypt(pk, m, rng);
}

Ciphertext combine(const Ciphertext& a, const Ciphertext& b) { return Factory::combine(a, b); }
Ciphertext scale(const Ciphertext& ct, const BigInt& s) { return Factory::scale(ct, s); }
Ciphertext negate(const Ciphertext& ct) { return Factory::negate(ct); }

Ciphertext flip_bit(const Ciphertext& ct, numkit::SeededRng& rng) {
  if (ct.empty()) throw ValidationError("operation on an empty DGK ciphertext");
  return combine(encrypt(ct.key(), 1, rng), negate(ct));
}

bool is_zero(const SecretKey& sk, const Ciphertext& ct) { return Factory::is_zero(sk, ct); }

std::string Ciphertext::to_hex() const { return Factory::to_hex(*this); }

Ciphertext Ciphertext::from_hex(std::shared_ptr<const PublicKey> key, const std::string& blob) {
  return Factory::from_hex(std::move(key), blob);
}

namespace detail {

BigInt debug_plaintext(const SecretKey& sk, const Ciphertext& ct) { return Factory::debug_plaintext(sk, ct); }

}  // namespace detail

}  // namespace lbscrypt::dgk
