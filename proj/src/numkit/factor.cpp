#include "lbscrypt/errors.hpp"
#include "lbscrypt/numkit.hpp"

#include <algorithm>
#include <array>

namespace lbscrypt::numkit {

namespace {

constexpr std::uint32_t kTrialLimit = 1'000'000;

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialLimit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kTrialLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j <= kTrialLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

bool miller_rabin_round(const BigInt& n, const BigInt& d, unsigned s, const BigInt& a) {
  BigInt x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const BigInt n1 = n - 1;
  if (x == 1 || x == n1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n1) return true;
    if (x == 1) return false;
  }
  return false;
}

// Brent's cycle finding with batched gcds. Returns a nontrivial factor of
// an odd composite n, or n itself if this polynomial constant failed.
BigInt brent_rho(const BigInt& n, unsigned long c) {
  const unsigned long batch = 128;
  BigInt y = 2, x, ys, q = 1, g = 1;
  auto f = [&](const BigInt& v) {
    BigInt r = v * v + c;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
    return r;
  };
  unsigned long r = 1;
  while (g == 1) {
    x = y;
    for (unsigned long i = 0; i < r; ++i) y = f(y);
    unsigned long k = 0;
    while (k < r && g == 1) {
      ys = y;
      unsigned long lim = std::min(batch, r - k);
      for (unsigned long i = 0; i < lim; ++i) {
        y = f(y);
        q = q * abs(x - y) % n;
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += lim;
    }
    r *= 2;
  }
  if (g == n) {
    // Batch overshot; back up one step at a time.
    do {
      ys = f(ys);
      BigInt diff = abs(x - ys);
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return g;
}

void factor_large(const BigInt& n, std::vector<BigInt>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  BigInt sq;
  if (mpz_perfect_square_p(n.get_mpz_t()) != 0) {
    mpz_sqrt(sq.get_mpz_t(), n.get_mpz_t());
    factor_large(sq, out);
    factor_large(sq, out);
    return;
  }
  for (unsigned long c = 1;; ++c) {
    BigInt d = brent_rho(n, c);
    if (d != n && d != 1) {
      factor_large(d, out);
      factor_large(BigInt(n / d), out);
      return;
    }
  }
}

}  // namespace

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  static constexpr std::array<unsigned, 13> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (unsigned p : kBases) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) return false;
  }
  // 3.317e24 bound for the 13-base deterministic variant.
  static const BigInt kDeterministicBound("3317044064679887385961981");
  if (n >= kDeterministicBound) return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;

  BigInt d = n - 1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t()) != 0) {
    d >>= 1;
    ++s;
  }
  for (unsigned p : kBases) {
    if (!miller_rabin_round(n, d, s, BigInt(p))) return false;
  }
  return true;
}

BigInt next_prime(const BigInt& n) {
  BigInt c = n + 1;
  if (c <= 2) return 2;
  if (mpz_even_p(c.get_mpz_t()) != 0) ++c;
  while (!is_prime(c)) c += 2;
  return c;
}

std::vector<BigInt> factorize(const BigInt& n) {
  if (n < 1) throw ValidationError("factorize requires n >= 1, got " + to_dec(n));
  std::vector<BigInt> out;
  BigInt rest = n;
  for (std::uint32_t p : small_primes()) {
    if (BigInt(p) * p > rest) break;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
      out.emplace_back(p);
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
    }
  }
  if (rest > 1) {
    if (rest <= BigInt(kTrialLimit) * kTrialLimit) {
      out.push_back(rest);  // no factor below its square root
    } else {
      factor_large(rest, out);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BigInt> divisors_up_to(const BigInt& n, const BigInt& bound) {
  if (n < 1) throw ValidationError("divisors_up_to requires n >= 1, got " + to_dec(n));
  if (bound < 1) throw ValidationError("divisors_up_to requires bound >= 1");
  std::vector<BigInt> primes = factorize(n);

  std::vector<std::pair<BigInt, unsigned>> powers;
  for (const BigInt& p : primes) {
    if (!powers.empty() && powers.back().first == p) {
      ++powers.back().second;
    } else {
      powers.emplace_back(p, 1);
    }
  }

  std::vector<BigInt> divs{BigInt(1)};
  for (const auto& [p, e] : powers) {
    std::size_t base_count = divs.size();
    for (std::size_t i = 0; i < base_count; ++i) {
      BigInt d = divs[i];
      for (unsigned k = 0; k < e; ++k) {
        d *= p;
        if (d > bound) break;
        divs.push_back(d);
      }
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

}  // namespace lbscrypt::numkit
