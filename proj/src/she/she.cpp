#include "lbscrypt/she.hpp"

#include "bfv.hpp"
#include "fingerprint.hpp"
#include "lbscrypt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace lbscrypt::she {

using detail::BfvPublic;
using detail::BfvSecret;
using detail::Poly;

namespace {

constexpr double kZeroNoise = -1.0e9;
// Synthetic budget per level for the transparent backend.
constexpr double kTransparentBitsPerLevel = 40.0;

double log2_add(double x, double y) {
  if (x < y) std::swap(x, y);
  if (y <= kZeroNoise) return x;
  return x + std::log2(1.0 + std::exp2(y - x));
}

double log2_big(const BigInt& v) {
  if (v == 0) return kZeroNoise;
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log2(std::fabs(mant)) + static_cast<double>(exp);
}

using lbscrypt::detail::fnv1a_hex;

std::string hex_fixed(const BigInt& v, std::size_t width) {
  std::string s = v.get_str(16);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

std::string poly_hex(const Poly& poly, const BigInt& q, std::size_t width) {
  std::string out;
  out.reserve(poly.size() * width);
  for (const BigInt& c : poly) out += hex_fixed(numkit::mod_floor(c, q), width);
  return out;
}

Poly poly_from_hex(std::string_view hex, std::size_t count, std::size_t width, const BigInt& q) {
  if (hex.size() != count * width) throw ValidationError("malformed bfv polynomial blob");
  Poly out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = BigInt(std::string(hex.substr(i * width, width)), 16);
    out[i] = numkit::centered(out[i], q);
  }
  return out;
}

Poly sample_ternary(numkit::SeededRng& rng, unsigned n) {
  Poly out(n);
  for (auto& c : out) c = static_cast<long>(numkit::rand_u64_below(rng, 3)) - 1;
  return out;
}

Poly sample_error(numkit::SeededRng& rng, unsigned n, unsigned bound) {
  Poly out(n);
  for (auto& c : out) {
    c = static_cast<long>(numkit::rand_u64_below(rng, 2 * bound + 1)) - static_cast<long>(bound);
  }
  return out;
}

Poly sample_uniform(numkit::SeededRng& rng, unsigned n, const BigInt& q) {
  Poly out(n);
  for (auto& c : out) c = numkit::centered(numkit::rand_below(rng, q), q);
  return out;
}

Poly scale(const Poly& a, const BigInt& k) {
  Poly out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * k;
  return out;
}

// Worst-case invariant-noise bounds, all in log2. See DESIGN notes in README.
struct NoiseModel {
  double log_p;
  double log_q;
  double log_n;
  double n;
  double relin_log2;  // log2((1 + N + N^2)/2 + L*N*(W/2)*B)

  static NoiseModel of(const BfvPublic& pub) {
    NoiseModel m{};
    m.log_p = log2_big(pub.p);
    m.log_q = log2_big(pub.q);
    m.n = pub.n;
    m.log_n = std::log2(m.n);
    double rounding = (1.0 + m.n + m.n * m.n) / 2.0;
    double relin = static_cast<double>(pub.digits) * m.n * std::exp2(pub.w_bits - 1.0) * pub.error_bound;
    m.relin_log2 = std::log2(rounding + relin);
    return m;
  }

  double fresh(unsigned error_bound) const {
    double enc = log_p - log_q + std::log2(error_bound * (2.0 * n + 1.0));
    double encoding = 2.0 * log_p - log_q;
    return log2_add(enc, encoding);
  }

  double add_plain(double v) const { return log2_add(v, 2.0 * log_p - log_q); }

  double mul(double v1, double v2) const {
    double s = log2_add(v1, v2);
    double t1 = log_p - 1.0 + s;
    double t2 = log_n + v1 + v2;
    double t3 = log_p + log_n + std::log2((n + 3.0) / 2.0) + s;
    double t4 = log_p - log_q + relin_log2;
    return log2_add(log2_add(t1, t2), log2_add(t3, t4));
  }
};

// Simulates max_depth levels of (sum of four terms, then square) and
// reports the remaining budget in bits.
double simulated_budget(const BfvPublic& pub, int depth) {
  NoiseModel nm = NoiseModel::of(pub);
  double v = nm.fresh(pub.error_bound);
  for (int d = 0; d < depth; ++d) {
    v += 2.0;
    v = nm.mul(v, v);
  }
  v += 2.0;
  return -1.0 - v;
}

void check_plain(const PublicKey& pk, const BigInt& m) {
  if (m < 0 || m >= pk.plain_modulus()) {
    throw ValidationError("plaintext " + numkit::to_dec(m) + " outside [0, p)");
  }
}

}  // namespace

namespace detail {

Poly mul_negacyclic(const Poly& a, const Poly& b) {
  const std::size_t n = a.size();
  Poly out(n, BigInt(0));
  BigInt prod;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      mpz_mul(prod.get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
      std::size_t k = i + j;
      if (k < n) {
        out[k] += prod;
      } else {
        out[k - n] -= prod;
      }
    }
  }
  return out;
}

void reduce_centered(Poly& a, const BigInt& q) {
  for (auto& c : a) c = numkit::centered(c, q);
}

Poly add(const Poly& a, const Poly& b) {
  Poly out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

}  // namespace detail

const char* to_string(Backend b) { return b == Backend::transparent ? "transparent" : "bfv"; }
const char* to_string(SecurityLevel s) { return s == SecurityLevel::toy ? "toy" : "small"; }

Backend backend_from_string(const std::string& s) {
  if (s == "transparent") return Backend::transparent;
  if (s == "bfv" || s == "real") return Backend::bfv;
  throw ValidationError("unknown SHE backend '" + s + "'");
}

unsigned ring_dimension(SecurityLevel level) { return level == SecurityLevel::toy ? 16 : 64; }

struct KeyFactory {
  static Keypair make(const SheParams& params, numkit::SeededRng& rng) {
    if (params.plain_modulus < 2) throw ValidationError("SHE plaintext modulus must be >= 2");
    if (params.max_depth < 1) throw ValidationError("SHE max_depth must be >= 1");

    auto pk = std::make_shared<PublicKey>();
    auto sk = std::make_shared<SecretKey>();
    pk->params_ = params;

    if (params.backend == Backend::transparent) {
      pk->transparent_tag_ = numkit::to_hex(numkit::rand_bits(rng, 64));
      pk->fingerprint_ = fnv1a_hex(pk->to_hex());
      sk->fingerprint_ = pk->fingerprint_;
      return {pk, sk};
    }

    auto pub = std::make_shared<BfvPublic>();
    auto sec = std::make_shared<BfvSecret>();
    pub->n = ring_dimension(params.level);
    pub->p = params.plain_modulus;
    pub->error_bound = 4;
    unsigned p_bits = numkit::bit_length(pub->p);
    pub->w_bits = std::clamp(p_bits, 8u, 64u);

    auto set_modulus = [&](unsigned q_bits) {
      pub->q = numkit::next_prime(numkit::pow2(q_bits - 1));
      pub->q_bits = numkit::bit_length(pub->q);
      pub->delta = pub->q / pub->p;
      pub->digits = (pub->q_bits + pub->w_bits - 1) / pub->w_bits + 1;
    };

    if (params.coeff_modulus_bits != 0) {
      if (params.coeff_modulus_bits <= p_bits + 8) {
        throw ValidationError("coefficient modulus must exceed the plaintext modulus by 8+ bits");
      }
      set_modulus(params.coeff_modulus_bits);
    } else {
      unsigned q_bits = p_bits + 16;
      set_modulus(q_bits);
      while (simulated_budget(*pub, params.max_depth) < 8.0) {
        q_bits += 8;
        set_modulus(q_bits);
      }
    }
    pub->fresh_noise_log2 = NoiseModel::of(*pub).fresh(pub->error_bound);

    const unsigned n = pub->n;
    const BigInt& q = pub->q;
    sec->s = sample_ternary(rng, n);

    pub->a = sample_uniform(rng, n, q);
    Poly e = sample_error(rng, n, pub->error_bound);
    pub->b = detail::mul_negacyclic(pub->a, sec->s);
    for (unsigned i = 0; i < n; ++i) pub->b[i] = -(pub->b[i] + e[i]);
    detail::reduce_centered(pub->b, q);

    Poly s2 = detail::mul_negacyclic(sec->s, sec->s);
    BigInt w_pow = 1;
    for (unsigned i = 0; i < pub->digits; ++i) {
      Poly ai = sample_uniform(rng, n, q);
      Poly ei = sample_error(rng, n, pub->error_bound);
      Poly bi = detail::mul_negacyclic(ai, sec->s);
      for (unsigned k = 0; k < n; ++k) bi[k] = -(bi[k] + ei[k]) + w_pow * s2[k];
      detail::reduce_centered(bi, q);
      pub->relin.emplace_back(std::move(bi), std::move(ai));
      w_pow <<= pub->w_bits;
    }

    pk->bfv_ = pub;
    sk->bfv_ = sec;
    pk->fingerprint_ = fnv1a_hex(pk->to_hex());
    sk->fingerprint_ = pk->fingerprint_;
    return {pk, sk};
  }
};

std::string PublicKey::to_hex() const {
  if (!bfv_) {
    return "she1t-pk:" + numkit::to_hex(params_.plain_modulus) + ":" + transparent_tag_;
  }
  std::size_t width = (bfv_->q_bits + 3) / 4;
  std::ostringstream os;
  os << "she1b-pk:" << bfv_->n << ':' << bfv_->q.get_str(16) << ':' << bfv_->p.get_str(16) << ':'
     << poly_hex(bfv_->b, bfv_->q, width) << poly_hex(bfv_->a, bfv_->q, width);
  return os.str();
}

struct Evaluator {
  static Ciphertext fresh(const std::shared_ptr<const PublicKey>& key) {
    Ciphertext ct;
    ct.key_ = key;
    return ct;
  }

  static const std::shared_ptr<const PublicKey>& same_key(const Ciphertext& a, const Ciphertext& b) {
    if (a.empty() || b.empty()) throw ValidationError("operation on an empty ciphertext");
    if (a.key_->fingerprint() != b.key_->fingerprint()) {
      throw KeyMismatch("ciphertexts were produced under different SHE keys");
    }
    return a.key_;
  }

  static double transparent_budget(const PublicKey& pk, int depth) {
    return kTransparentBitsPerLevel * (pk.params().max_depth + 1 - depth);
  }

  static void finish_bfv(Ciphertext& ct, double noise_log2, const char* op) {
    ct.noise_log2_ = noise_log2;
    ct.budget_bits_ = -1.0 - noise_log2;
    if (ct.budget_bits_ <= 0.0) {
      throw NoiseBudgetExhausted(std::string("noise budget exhausted by ") + op);
    }
  }

  static Ciphertext encrypt(const std::shared_ptr<const PublicKey>& pk, const BigInt& m, numkit::SeededRng& rng) {
    if (!pk) throw ValidationError("encrypt without a public key");
    check_plain(*pk, m);
    Ciphertext ct = fresh(pk);
    if (const BfvPublic* pub = pk->bfv()) {
      Poly u = sample_ternary(rng, pub->n);
      Poly e1 = sample_error(rng, pub->n, pub->error_bound);
      Poly e2 = sample_error(rng, pub->n, pub->error_bound);
      BfvPayload body;
      body.c0 = detail::add(detail::mul_negacyclic(pub->b, u), e1);
      body.c0[0] += pub->delta * m;
      body.c1 = detail::add(detail::mul_negacyclic(pub->a, u), e2);
      detail::reduce_centered(body.c0, pub->q);
      detail::reduce_centered(body.c1, pub->q);
      ct.payload_ = std::move(body);
      finish_bfv(ct, pub->fresh_noise_log2, "encrypt");
    } else {
      TransparentPayload body;
      body.value = m;
      body.nonce = rng.next_u64();
      body.log = {"enc"};
      ct.payload_ = std::move(body);
      ct.budget_bits_ = transparent_budget(*pk, 0);
    }
    return ct;
  }

  static BigInt decrypt(const SecretKey& sk, const Ciphertext& ct) {
    if (ct.empty()) throw ValidationError("decrypt of an empty ciphertext");
    if (sk.fingerprint() != ct.key_->fingerprint()) {
      throw KeyMismatch("ciphertext does not belong to this secret key");
    }
    if (const auto* t = std::get_if<TransparentPayload>(&ct.payload_)) return t->value;
    const BfvPublic& pub = *ct.key_->bfv();
    const auto& body = std::get<BfvPayload>(ct.payload_);
    BigInt x = body.c0[0];
    // Constant coefficient of c1 * s under x^n = -1.
    const Poly& s = sk.bfv()->s;
    for (unsigned j = 0; j < pub.n; ++j) {
      unsigned i = (pub.n - j) % pub.n;
      if (i == 0) {
        x += body.c1[0] * s[0];
      } else {
        x -= body.c1[i] * s[j];
      }
    }
    x = numkit::centered(x, pub.q);
    BigInt num = 2 * pub.p * x + pub.q;
    BigInt den = 2 * pub.q;
    BigInt rounded;
    mpz_fdiv_q(rounded.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return numkit::mod_floor(rounded, pub.p);
  }

  static double measure(const SecretKey& sk, const Ciphertext& ct) {
    if (sk.fingerprint() != ct.key_->fingerprint()) throw KeyMismatch("foreign ciphertext");
    if (std::holds_alternative<TransparentPayload>(ct.payload_)) return ct.budget_bits_;
    const BfvPublic& pub = *ct.key_->bfv();
    const auto& body = std::get<BfvPayload>(ct.payload_);
    Poly x = detail::add(body.c0, detail::mul_negacyclic(body.c1, sk.bfv()->s));
    detail::reduce_centered(x, pub.q);
    double worst = kZeroNoise;
    for (const BigInt& c : x) {
      // p*c/q = k + r/q with |r| <= q/2; invariant noise is r/q.
      BigInt r = numkit::centered(pub.p * c, pub.q);
      worst = std::max(worst, log2_big(r) - log2_big(pub.q));
    }
    return -1.0 - worst;
  }

  template <typename TransparentOp, typename BfvOp>
  static Ciphertext binary(const Ciphertext& a, const Ciphertext& b, const char* name, TransparentOp top, BfvOp bop) {
    const auto& key = same_key(a, b);
    Ciphertext ct = fresh(key);
    ct.depth_ = std::max(a.depth_, b.depth_);
    if (key->bfv() == nullptr) {
      const auto& ta = std::get<TransparentPayload>(a.payload_);
      const auto& tb = std::get<TransparentPayload>(b.payload_);
      TransparentPayload body;
      body.value = numkit::mod_floor(top(ta.value, tb.value), key->plain_modulus());
      body.log = ta.log;
      body.log.insert(body.log.end(), tb.log.begin(), tb.log.end());
      body.log.emplace_back(name);
      ct.payload_ = std::move(body);
      ct.budget_bits_ = std::min(a.budget_bits_, b.budget_bits_);
      return ct;
    }
    bop(ct, std::get<BfvPayload>(a.payload_), std::get<BfvPayload>(b.payload_));
    finish_bfv(ct, log2_add(a.noise_log2_, b.noise_log2_), name);
    return ct;
  }

  static Ciphertext add(const Ciphertext& a, const Ciphertext& b) {
    return binary(
        a, b, "add", [](const BigInt& x, const BigInt& y) { return BigInt(x + y); },
        [](Ciphertext& ct, const BfvPayload& x, const BfvPayload& y) {
          const BigInt& q = ct.key_->bfv()->q;
          BfvPayload body{detail::add(x.c0, y.c0), detail::add(x.c1, y.c1)};
          detail::reduce_centered(body.c0, q);
          detail::reduce_centered(body.c1, q);
          ct.payload_ = std::move(body);
        });
  }

  static Ciphertext sub(const Ciphertext& a, const Ciphertext& b) {
    return binary(
        a, b, "sub", [](const BigInt& x, const BigInt& y) { return BigInt(x - y); },
        [](Ciphertext& ct, const BfvPayload& x, const BfvPayload& y) {
          const BigInt& q = ct.key_->bfv()->q;
          BfvPayload body{detail::add(x.c0, scale(y.c0, -1)), detail::add(x.c1, scale(y.c1, -1))};
          detail::reduce_centered(body.c0, q);
          detail::reduce_centered(body.c1, q);
          ct.payload_ = std::move(body);
        });
  }

  static Ciphertext add_plain(const Ciphertext& a, const BigInt& m) {
    if (a.empty()) throw ValidationError("operation on an empty ciphertext");
    check_plain(*a.key_, m);
    Ciphertext ct = a;
    if (auto* t = std::get_if<TransparentPayload>(&ct.payload_)) {
      t->value = numkit::mod_floor(t->value + m, a.key_->plain_modulus());
      t->log.emplace_back("add_plain");
      return ct;
    }
    const BfvPublic& pub = *a.key_->bfv();
    auto& body = std::get<BfvPayload>(ct.payload_);
    body.c0[0] = numkit::centered(body.c0[0] + pub.delta * m, pub.q);
    finish_bfv(ct, NoiseModel::of(pub).add_plain(a.noise_log2_), "add_plain");
    return ct;
  }

  static Ciphertext mul_plain(const Ciphertext& a, const BigInt& m) {
    if (a.empty()) throw ValidationError("operation on an empty ciphertext");
    check_plain(*a.key_, m);
    Ciphertext ct = a;
    if (auto* t = std::get_if<TransparentPayload>(&ct.payload_)) {
      t->value = numkit::mod_floor(t->value * m, a.key_->plain_modulus());
      t->log.emplace_back("mul_plain");
      return ct;
    }
    const BfvPublic& pub = *a.key_->bfv();
    BigInt k = numkit::centered(m, pub.p);
    auto& body = std::get<BfvPayload>(ct.payload_);
    body.c0 = scale(body.c0, k);
    body.c1 = scale(body.c1, k);
    detail::reduce_centered(body.c0, pub.q);
    detail::reduce_centered(body.c1, pub.q);
    double noise = k == 0 ? kZeroNoise : a.noise_log2_ + log2_big(abs(k));
    finish_bfv(ct, noise, "mul_plain");
    return ct;
  }

  static Ciphertext mul(const Ciphertext& a, const Ciphertext& b) {
    const auto& key = same_key(a, b);
    const int max_depth = key->params().max_depth;
    if (a.depth_ >= max_depth || b.depth_ >= max_depth) {
      throw DepthExhausted("multiplicative depth exhausted (max_depth = " + std::to_string(max_depth) + ")");
    }
    if (key->bfv() == nullptr) {
      Ciphertext ct = binary(
          a, b, "mul", [](const BigInt& x, const BigInt& y) { return BigInt(x * y); },
          [](Ciphertext&, const BfvPayload&, const BfvPayload&) {});
      ct.depth_ = std::max(a.depth_, b.depth_) + 1;
      ct.budget_bits_ = transparent_budget(*key, ct.depth_);
      return ct;
    }

    const BfvPublic& pub = *key->bfv();
    const auto& x = std::get<BfvPayload>(a.payload_);
    const auto& y = std::get<BfvPayload>(b.payload_);
    Poly d0 = detail::mul_negacyclic(x.c0, y.c0);
    Poly d1 = detail::add(detail::mul_negacyclic(x.c0, y.c1), detail::mul_negacyclic(x.c1, y.c0));
    Poly d2 = detail::mul_negacyclic(x.c1, y.c1);

    // round(p * d / q) = floor((2 p d + q) / (2 q))
    const BigInt two_q = 2 * pub.q;
    auto rescale = [&](Poly& poly) {
      for (auto& c : poly) {
        BigInt num = 2 * pub.p * c + pub.q;
        mpz_fdiv_q(c.get_mpz_t(), num.get_mpz_t(), two_q.get_mpz_t());
      }
      detail::reduce_centered(poly, pub.q);
    };
    rescale(d0);
    rescale(d1);
    rescale(d2);

    // Relinearize d2 with balanced base-W digits.
    const BigInt w = numkit::pow2(pub.w_bits);
    const BigInt half_w = w / 2;
    std::vector<Poly> digits(pub.digits, Poly(pub.n, BigInt(0)));
    for (unsigned k = 0; k < pub.n; ++k) {
      BigInt rest = d2[k];
      for (unsigned i = 0; i < pub.digits; ++i) {
        BigInt dig = numkit::mod_floor(rest, w);
        if (dig >= half_w) dig -= w;
        digits[i][k] = dig;
        rest = (rest - dig) >> pub.w_bits;
      }
      if (rest != 0) throw CryptoError("relinearization digit overflow");
    }
    for (unsigned i = 0; i < pub.digits; ++i) {
      d0 = detail::add(d0, detail::mul_negacyclic(digits[i], pub.relin[i].first));
      d1 = detail::add(d1, detail::mul_negacyclic(digits[i], pub.relin[i].second));
    }
    detail::reduce_centered(d0, pub.q);
    detail::reduce_centered(d1, pub.q);

    Ciphertext ct = fresh(key);
    ct.depth_ = std::max(a.depth_, b.depth_) + 1;
    ct.payload_ = BfvPayload{std::move(d0), std::move(d1)};
    finish_bfv(ct, NoiseModel::of(pub).mul(a.noise_log2_, b.noise_log2_), "mul");
    return ct;
  }

  static Ciphertext from_hex(std::shared_ptr<const PublicKey> key, const std::string& blob) {
    if (!key) throw ValidationError("from_hex without a key");
    Ciphertext ct = fresh(key);
    auto fields = [&](std::size_t count) {
      std::vector<std::string> out;
      std::size_t pos = 0;
      for (std::size_t i = 0; i + 1 < count; ++i) {
        std::size_t next = blob.find(':', pos);
        if (next == std::string::npos) throw ValidationError("malformed SHE ciphertext blob");
        out.push_back(blob.substr(pos, next - pos));
        pos = next + 1;
      }
      out.push_back(blob.substr(pos));
      return out;
    };
    if (blob.rfind("she1t:", 0) == 0) {
      if (key->bfv() != nullptr) throw KeyMismatch("transparent blob for a bfv key");
      auto f = fields(4);
      TransparentPayload body;
      ct.depth_ = std::stoi(f[1]);
      body.value = BigInt(f[2], 16);
      body.nonce = std::stoull(f[3], nullptr, 16);
      body.log = {"decoded"};
      check_plain(*key, body.value);
      ct.payload_ = std::move(body);
      ct.budget_bits_ = transparent_budget(*key, ct.depth_);
      return ct;
    }
    if (blob.rfind("she1b:", 0) == 0) {
      const BfvPublic* pub = key->bfv();
      if (pub == nullptr) throw KeyMismatch("bfv blob for a transparent key");
      auto f = fields(4);
      ct.depth_ = std::stoi(f[1]);
      double noise = std::strtod(f[2].c_str(), nullptr);
      std::size_t width = (pub->q_bits + 3) / 4;
      std::string_view polys(f[3]);
      if (polys.size() != 2 * pub->n * width) throw ValidationError("malformed SHE ciphertext blob");
      BfvPayload body;
      body.c0 = poly_from_hex(polys.substr(0, pub->n * width), pub->n, width, pub->q);
      body.c1 = poly_from_hex(polys.substr(pub->n * width), pub->n, width, pub->q);
      ct.payload_ = std::move(body);
      finish_bfv(ct, noise, "decode");
      return ct;
    }
    throw ValidationError("unknown SHE ciphertext format tag");
  }

  static std::string to_hex(const Ciphertext& ct) {
    if (ct.empty()) return "";
    if (const auto* t = std::get_if<TransparentPayload>(&ct.payload_)) {
      char nonce[17];
      std::snprintf(nonce, sizeof(nonce), "%016llx", static_cast<unsigned long long>(t->nonce));
      return "she1t:" + std::to_string(ct.depth_) + ":" + t->value.get_str(16) + ":" + nonce;
    }
    const BfvPublic& pub = *ct.key_->bfv();
    const auto& body = std::get<BfvPayload>(ct.payload_);
    std::size_t width = (pub.q_bits + 3) / 4;
    char noise[64];
    std::snprintf(noise, sizeof(noise), "%a", ct.noise_log2_);
    return "she1b:" + std::to_string(ct.depth_) + ":" + noise + ":" + poly_hex(body.c0, pub.q, width) +
           poly_hex(body.c1, pub.q, width);
  }
};

std::string Ciphertext::to_hex() const { return Evaluator::to_hex(*this); }

Ciphertext Ciphertext::from_hex(std::shared_ptr<const PublicKey> key, const std::string& blob) {
  return Evaluator::from_hex(std::move(key), blob);
}

Keypair keygen(const SheParams& params, numkit::SeededRng& rng) { return KeyFactory::make(params, rng); }

Ciphertext encrypt(const std::shared_ptr<const PublicKey>& pk, const BigInt& m, numkit::SeededRng& rng) {
  return Evaluator::encrypt(pk, m, rng);
}

BigInt decrypt(const SecretKey& sk, const Ciphertext& ct) { return Evaluator::decrypt(sk, ct); }

Ciphertext add(const Ciphertext& a, const Ciphertext& b) { return Evaluator::add(a, b); }
Ciphertext sub(const Ciphertext& a, const Ciphertext& b) { return Evaluator::sub(a, b); }

Ciphertext negate(const Ciphertext& a) {
  if (a.empty()) throw ValidationError("operation on an empty ciphertext");
  return Evaluator::mul_plain(a, a.key()->plain_modulus() - 1);
}

Ciphertext add_plain(const Ciphertext& a, const BigInt& m) { return Evaluator::add_plain(a, m); }
Ciphertext mul_plain(const Ciphertext& a, const BigInt& m) { return Evaluator::mul_plain(a, m); }
Ciphertext mul(const Ciphertext& a, const Ciphertext& b) { return Evaluator::mul(a, b); }

double measure_noise_budget(const SecretKey& sk, const Ciphertext& ct) { return Evaluator::measure(sk, ct); }

}  // namespace lbscrypt::she
