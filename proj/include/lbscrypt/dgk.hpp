#pragma once

#include "lbscrypt/numkit.hpp"

#include <memory>
#include <string>
#include <variant>

// DGK-style additively homomorphic encryption over Z_u for a small prime u.
// Only the decryption-time zero test is exposed.
//
//   n = p*q,  p = 2*u*vp*fp + 1,  q = 2*u*vq*fq + 1
//   g has order u*vp*vq, h has order vp*vq
//   Enc(m) = g^m * h^r mod n
//   is_zero(c)  <=>  c^vp mod p == 1
namespace lbscrypt::dgk {

enum class Backend { transparent, group };

const char* to_string(Backend b);
Backend backend_from_string(const std::string& s);

struct GroupPublic {
  BigInt n;
  BigInt g;
  BigInt h;
  unsigned r_bits = 0;
};

struct GroupSecret {
  BigInt p;
  BigInt vp;
  // Order-u element g^vp mod p; lets tests enumerate discrete logs.
  BigInt g_vp;
};

class PublicKey {
 public:
  const BigInt& u() const noexcept { return u_; }
  Backend backend() const noexcept { return backend_; }
  const std::string& fingerprint() const noexcept { return fingerprint_; }
  const GroupPublic* group() const noexcept { return group_ ? &*group_ : nullptr; }
  std::string to_hex() const;

 private:
  friend struct Factory;
  BigInt u_;
  Backend backend_ = Backend::transparent;
  std::string fingerprint_;
  std::string tag_;
  std::shared_ptr<const GroupPublic> group_;
};

class SecretKey {
 public:
  const std::string& fingerprint() const noexcept { return fingerprint_; }
  const GroupSecret* group() const noexcept { return group_ ? &*group_ : nullptr; }

 private:
  friend struct Factory;
  std::string fingerprint_;
  std::shared_ptr<const GroupSecret> group_;
};

struct Keypair {
  std::shared_ptr<const PublicKey> pk;
  std::shared_ptr<const SecretKey> sk;
};

struct TransparentPayload {
  BigInt value;  // residue mod u
  std::uint64_t nonce = 0;
};

class Ciphertext {
 public:
  const std::shared_ptr<const PublicKey>& key() const noexcept { return key_; }
  bool empty() const noexcept { return key_ == nullptr; }
  const std::variant<TransparentPayload, BigInt>& payload() const noexcept { return payload_; }

  /// "dgk1t:..." or "dgk1g:..." hex blob.
  std::string to_hex() const;
  static Ciphertext from_hex(std::shared_ptr<const PublicKey> key, const std::string& blob);

 private:
  friend struct Factory;
  std::shared_ptr<const PublicKey> key_;
  std::variant<TransparentPayload, BigInt> payload_;
};

/// `bits` is the modulus size (>= 256) for the group backend; `u` must be prime.
Keypair keygen(Backend backend, unsigned bits, const BigInt& u, numkit::SeededRng& rng);

/// 0 <= m < u.
Ciphertext encrypt(const std::shared_ptr<const PublicKey>& pk, const BigInt& m, numkit::SeededRng& rng);

/// Plaintext addition mod u.
Ciphertext combine(const Ciphertext& a, const Ciphertext& b);

/// Plaintext multiplication by a known scalar s >= 1.
Ciphertext scale(const Ciphertext& ct, const BigInt& s);

/// Plaintext negation mod u.
Ciphertext negate(const Ciphertext& ct);

/// Encryption of (1 - m) given Enc(m) for a bit m; used to XOR with a known 1.
Ciphertext flip_bit(const Ciphertext& ct, numkit::SeededRng& rng);

bool is_zero(const SecretKey& sk, const Ciphertext& ct);

}  // namespace lbscrypt::dgk
