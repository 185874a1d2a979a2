#pragma once

// Test-only: recovers a DGK plaintext by exhaustive discrete log over Z_u.
// The protocol never needs this; it exists so tests can check homomorphic
// identities and blinding distributions against a plaintext oracle.

#include "lbscrypt/dgk.hpp"

namespace lbscrypt::dgk::detail {

BigInt debug_plaintext(const SecretKey& sk, const Ciphertext& ct);

}  // namespace lbscrypt::dgk::detail
