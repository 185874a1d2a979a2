#include "lbscrypt/errors.hpp"
#include "lbscrypt/numkit.hpp"

#include <limits>

namespace lbscrypt::numkit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

SeededRng SeededRng::derive(std::uint64_t seed, std::uint64_t index) {
  return SeededRng(splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

BigInt rand_bits(SeededRng& rng, unsigned n_bits) {
  if (n_bits == 0) throw ValidationError("rand_bits requires n_bits >= 1");
  BigInt out = 0;
  unsigned remaining = n_bits;
  while (remaining > 0) {
    std::uint64_t word = rng.next_u64();
    unsigned take = remaining >= 64 ? 64 : remaining;
    if (take < 64) word &= (std::uint64_t{1} << take) - 1;
    out <<= take;
    BigInt w;
    mpz_import(w.get_mpz_t(), 1, -1, sizeof(word), 0, 0, &word);
    out += w;
    remaining -= take;
  }
  return out;
}

BigInt rand_below(SeededRng& rng, const BigInt& bound) {
  if (bound < 1) throw ValidationError("rand_below requires bound >= 1");
  if (bound == 1) return 0;
  unsigned bits = bit_length(bound - 1);
  for (;;) {
    BigInt v = rand_bits(rng, bits);
    if (v < bound) return v;
  }
}

BigInt rand_range(SeededRng& rng, const BigInt& lo, const BigInt& hi) {
  if (hi < lo) throw ValidationError("rand_range with empty interval");
  return lo + rand_below(rng, hi - lo + 1);
}

std::uint64_t rand_u64_below(SeededRng& rng, std::uint64_t bound) {
  if (bound == 0) throw ValidationError("rand_u64_below requires bound >= 1");
  // Reject the incomplete final block so v % bound stays unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    std::uint64_t v = rng.next_u64();
    if (v < limit) return v % bound;
  }
}

}  // namespace lbscrypt::numkit
