#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lbscrypt {

using BigInt = mpz_class;
using Rational = mpq_class;

namespace numkit {

// ---------------------------------------------------------------------------
// Encoding helpers
// ---------------------------------------------------------------------------

/// Parses a signed decimal ("-123") or hexadecimal ("0x7b", "-0x7B") integer.
/// Throws ValidationError on anything else.
BigInt parse_bigint(std::string_view text);

std::string to_dec(const BigInt& v);

/// Lower-case hex with "0x" prefix and leading '-' for negatives.
std::string to_hex(const BigInt& v);

/// Builds num/den in lowest terms with a positive denominator.
Rational make_rational(const BigInt& num, const BigInt& den);

bool is_integer(const Rational& r);

/// Centered representative of x mod p, in (-p/2, p/2].
BigInt centered(const BigInt& x, const BigInt& p);

/// x mod p in [0, p).
BigInt mod_floor(const BigInt& x, const BigInt& p);

/// x mod 2^l in [0, 2^l), for any sign of x.
BigInt mod_reduce(const BigInt& x, unsigned l);

/// Bit `i` of a non-negative integer.
bool bit(const BigInt& x, unsigned i);

BigInt pow2(unsigned e);

/// Number of bits in |x| (0 for x == 0).
unsigned bit_length(const BigInt& x);

/// Smallest l with 2^l >= x + 1, i.e. ceil(log2(x + 1)).
unsigned ceil_log2_plus_one(const BigInt& x);

std::uint64_t to_u64(const BigInt& x);

// ---------------------------------------------------------------------------
// Seeded randomness
// ---------------------------------------------------------------------------

/// Deterministic 64-bit stream. mt19937_64 is fully specified by the standard,
/// and no std distributions are used, so a seed yields the same values on
/// every conforming platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t position() const noexcept { return position_; }

  std::uint64_t next_u64() {
    ++position_;
    return engine_();
  }

  /// Independent stream for sub-task `index` (trial, entity, ...).
  static SeededRng derive(std::uint64_t seed, std::uint64_t index);

  SeededRng(const SeededRng&) = delete;
  SeededRng& operator=(const SeededRng&) = delete;
  SeededRng(SeededRng&&) = default;
  SeededRng& operator=(SeededRng&&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
  std::mt19937_64 engine_;
};

/// Uniform integer in [0, 2^n_bits).
BigInt rand_bits(SeededRng& rng, unsigned n_bits);

/// Uniform integer in [0, bound), bound >= 1. Rejection sampling.
BigInt rand_below(SeededRng& rng, const BigInt& bound);

/// Uniform integer in [lo, hi].
BigInt rand_range(SeededRng& rng, const BigInt& lo, const BigInt& hi);

std::uint64_t rand_u64_below(SeededRng& rng, std::uint64_t bound);

template <typename T>
void shuffle(std::vector<T>& items, SeededRng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rand_u64_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

// ---------------------------------------------------------------------------
// Primes and factoring
// ---------------------------------------------------------------------------

/// Miller-Rabin with the first 13 prime bases: exact below 3.3e24, and
/// backed by GMP's BPSW test above that.
bool is_prime(const BigInt& n);

/// Smallest prime strictly greater than n.
BigInt next_prime(const BigInt& n);

/// Prime factors of n with multiplicity, ascending. Trial division up to
/// 10^6, then Brent's variant of Pollard rho. Throws ValidationError for n < 1.
std::vector<BigInt> factorize(const BigInt& n);

/// Divisors d of n with 1 <= d <= bound, ascending. Throws for n < 1.
std::vector<BigInt> divisors_up_to(const BigInt& n, const BigInt& bound);

// ---------------------------------------------------------------------------
// Exact 2-unknown linear solving
// ---------------------------------------------------------------------------

/// a*X + b*Y = c
struct LinearRow {
  BigInt a;
  BigInt b;
  BigInt c;
};

enum class SolveStatus { unique, underdetermined, inconsistent };

struct LinearSolution {
  SolveStatus status = SolveStatus::underdetermined;
  Rational x;
  Rational y;
};

/// Solves an (over)determined system in two unknowns exactly. A unique
/// solution is only reported if it satisfies every row.
LinearSolution solve_linear_exact(std::span<const LinearRow> rows);

const char* to_string(SolveStatus s);

}  // namespace numkit
}  // namespace lbscrypt
