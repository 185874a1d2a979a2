#pragma once

// Internal ring arithmetic for the BFV backend.

#include "lbscrypt/numkit.hpp"

#include <vector>

namespace lbscrypt::she::detail {

using Poly = std::vector<BigInt>;

struct BfvPublic {
  unsigned n = 0;
  BigInt q;
  BigInt p;
  BigInt delta;  // floor(q / p)
  unsigned q_bits = 0;
  unsigned w_bits = 0;   // relinearization digit size
  unsigned digits = 0;   // relinearization digit count
  unsigned error_bound = 0;
  double fresh_noise_log2 = 0.0;
  Poly b;  // -(a*s + e)
  Poly a;
  std::vector<std::pair<Poly, Poly>> relin;  // (-(a_i*s + e_i) + W^i * s^2, a_i)
};

struct BfvSecret {
  Poly s;
};

/// Exact negacyclic product in Z[x]/(x^n + 1), no modular reduction.
Poly mul_negacyclic(const Poly& a, const Poly& b);

/// Coefficients reduced into (-q/2, q/2].
void reduce_centered(Poly& a, const BigInt& q);

Poly add(const Poly& a, const Poly& b);

}  // namespace lbscrypt::she::detail
