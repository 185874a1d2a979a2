#pragma once

#include "lbscrypt/numkit.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

// Leveled somewhat-homomorphic encryption over integer plaintexts mod p.
//
// Two interchangeable backends sit behind one value-type API:
//  - transparent: the payload is the plaintext itself plus an operation log
//    and synthetic depth/noise counters. Used by protocol and attack tests.
//  - bfv: textbook Fan-Vercauteren over Z_q[x]/(x^N + 1) with integers
//    encoded in the constant coefficient. Noise is tracked as a worst-case
//    bound on the invariant noise, so evaluation fails loudly before any
//    decryption could go wrong.
//
// Signed plaintexts are residues mod p; use numkit::centered() to decode.
namespace lbscrypt::she {

enum class Backend { transparent, bfv };
enum class SecurityLevel { toy, small };

const char* to_string(Backend b);
const char* to_string(SecurityLevel s);
Backend backend_from_string(const std::string& s);

struct SheParams {
  BigInt plain_modulus;  // p, prime or prime power
  SecurityLevel level = SecurityLevel::toy;
  int max_depth = 2;
  Backend backend = Backend::transparent;
  // bfv only: 0 selects the smallest q that supports max_depth squarings.
  unsigned coeff_modulus_bits = 0;
};

/// Ring dimension N for a security label.
unsigned ring_dimension(SecurityLevel level);

namespace detail {
struct BfvPublic;
struct BfvSecret;
}  // namespace detail

class PublicKey {
 public:
  const SheParams& params() const noexcept { return params_; }
  const BigInt& plain_modulus() const noexcept { return params_.plain_modulus; }
  /// Stable identifier derived from the serialized key.
  const std::string& fingerprint() const noexcept { return fingerprint_; }
  std::string to_hex() const;

  // bfv internals; null for the transparent backend.
  const detail::BfvPublic* bfv() const noexcept { return bfv_.get(); }

 private:
  friend struct KeyFactory;
  SheParams params_;
  std::string fingerprint_;
  std::string transparent_tag_;
  std::shared_ptr<const detail::BfvPublic> bfv_;
};

class SecretKey {
 public:
  const std::string& fingerprint() const noexcept { return fingerprint_; }
  const detail::BfvSecret* bfv() const noexcept { return bfv_.get(); }

 private:
  friend struct KeyFactory;
  std::string fingerprint_;  // of the matching public key
  std::shared_ptr<const detail::BfvSecret> bfv_;
};

struct Keypair {
  std::shared_ptr<const PublicKey> pk;
  std::shared_ptr<const SecretKey> sk;
};

struct TransparentPayload {
  BigInt value;
  std::uint64_t nonce = 0;
  std::vector<std::string> log;
};

struct BfvPayload {
  std::vector<BigInt> c0;
  std::vector<BigInt> c1;
};

class Ciphertext {
 public:
  Ciphertext() = default;

  int depth_used() const noexcept { return depth_; }
  /// Remaining noise budget in bits. Synthetic counter for transparent.
  double noise_budget_bits() const noexcept { return budget_bits_; }
  const std::shared_ptr<const PublicKey>& key() const noexcept { return key_; }
  bool empty() const noexcept { return key_ == nullptr; }

  const std::variant<TransparentPayload, BfvPayload>& payload() const noexcept { return payload_; }

  /// Opaque versioned blob: "she1t:" or "she1b:" followed by hex.
  std::string to_hex() const;
  static Ciphertext from_hex(std::shared_ptr<const PublicKey> key, const std::string& blob);

 private:
  friend struct Evaluator;
  std::shared_ptr<const PublicKey> key_;
  int depth_ = 0;
  double budget_bits_ = 0.0;
  // log2 of the invariant-noise bound (bfv only).
  double noise_log2_ = 0.0;
  std::variant<TransparentPayload, BfvPayload> payload_;
};

/// Throws ValidationError for an unusable plaintext modulus or depth.
Keypair keygen(const SheParams& params, numkit::SeededRng& rng);

/// 0 <= m < p, else ValidationError.
Ciphertext encrypt(const std::shared_ptr<const PublicKey>& pk, const BigInt& m, numkit::SeededRng& rng);

/// Residue in [0, p). Throws KeyMismatch for a foreign ciphertext.
BigInt decrypt(const SecretKey& sk, const Ciphertext& ct);

Ciphertext add(const Ciphertext& a, const Ciphertext& b);
Ciphertext sub(const Ciphertext& a, const Ciphertext& b);
Ciphertext negate(const Ciphertext& a);
Ciphertext add_plain(const Ciphertext& a, const BigInt& m);
Ciphertext mul_plain(const Ciphertext& a, const BigInt& m);
/// Throws DepthExhausted when either input is already at max_depth, and
/// NoiseBudgetExhausted when the worst-case noise bound would exceed 1/2.
Ciphertext mul(const Ciphertext& a, const Ciphertext& b);

/// Actual remaining noise budget measured with the secret key (bfv only;
/// transparent returns the synthetic counter). Test and diagnostics use.
double measure_noise_budget(const SecretKey& sk, const Ciphertext& ct);

}  // namespace lbscrypt::she
