#include "lbscrypt/errors.hpp"
#include "lbscrypt/numkit.hpp"

#include <cctype>
#include <limits>

namespace lbscrypt::numkit {

BigInt parse_bigint(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  int base = 10;
  if (body.size() > 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) {
    base = 16;
    body.remove_prefix(2);
  }
  if (body.empty()) throw ValidationError("not an integer: '" + std::string(text) + "'");
  for (char ch : body) {
    auto c = static_cast<unsigned char>(ch);
    bool ok = base == 10 ? std::isdigit(c) != 0 : std::isxdigit(c) != 0;
    if (!ok) throw ValidationError("not an integer: '" + std::string(text) + "'");
  }
  BigInt v(std::string(body), base);
  return negative ? BigInt(-v) : v;
}

std::string to_dec(const BigInt& v) { return v.get_str(10); }

std::string to_hex(const BigInt& v) {
  BigInt mag = abs(v);
  std::string s = (v < 0 ? "-0x" : "0x") + mag.get_str(16);
  return s;
}

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

BigInt mod_floor(const BigInt& x, const BigInt& p) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
  return r;
}

BigInt centered(const BigInt& x, const BigInt& p) {
  BigInt r = mod_floor(x, p);
  if (2 * r > p) r -= p;
  return r;
}

BigInt mod_reduce(const BigInt& x, unsigned l) {
  if (l == 0) throw ValidationError("mod_reduce requires l >= 1");
  BigInt r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), x.get_mpz_t(), l);
  return r;
}

bool bit(const BigInt& x, unsigned i) { return mpz_tstbit(x.get_mpz_t(), i) != 0; }

BigInt pow2(unsigned e) {
  BigInt r;
  mpz_setbit(r.get_mpz_t(), e);
  return r;
}

unsigned bit_length(const BigInt& x) {
  if (x == 0) return 0;
  return static_cast<unsigned>(mpz_sizeinbase(x.get_mpz_t(), 2));
}

unsigned ceil_log2_plus_one(const BigInt& x) {
  if (x < 0) throw ValidationError("ceil_log2_plus_one of negative value");
  // 2^l >= x + 1  <=>  2^l > x  <=>  l >= bit_length(x)
  return bit_length(x);
}

std::uint64_t to_u64(const BigInt& x) {
  if (x < 0 || bit_length(x) > 64) throw ValidationError("value does not fit in 64 bits: " + to_dec(x));
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, x.get_mpz_t());
  return out;
}

}  // namespace lbscrypt::numkit
