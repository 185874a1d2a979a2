#include "lbscrypt/attacks.hpp"

namespace lbscrypt::attacks {

namespace {

std::string bits_msb_first(const BigInt& v, unsigned l) {
  std::string s;
  for (unsigned j = l; j-- > 0;) s.push_back(numkit::bit(v, j) ? '1' : '0');
  return "(" + s + ")_2";
}

}  // namespace

WorkedExamples run_worked_examples() {
  WorkedExamples out;
  auto check = [&](std::string label, std::string expected, std::string actual) {
    bool ok = expected == actual;
    out.lines.push_back({std::move(label), std::move(expected), std::move(actual), ok});
  };

  const unsigned l = 2;
  const BigInt rho = 31;
  MsbCollision c = build_msb_collision(l, rho, 3);

  struct Case {
    const char* name;
    BigInt z;
    BigInt w;
    const char* w_expected;
    const char* msb_expected;
  };
  const Case cases[] = {{"Example 1", c.z0, c.w0, "34", "0"}, {"Example 2", c.z1, c.w1, "38", "1"}};
  for (const auto& k : cases) {
    std::string p = std::string(k.name) + ": ";
    check(p + "z", k.name == std::string("Example 1") ? "3" : "7", numkit::to_dec(k.z));
    check(p + "w", k.w_expected, numkit::to_dec(k.w));
    BigInt wbar = numkit::mod_reduce(k.w, l);
    check(p + "w̄", "2", numkit::to_dec(wbar));
    check(p + "w̄ bits", "(10)_2", bits_msb_first(wbar, l));
    BigInt rhobar = numkit::mod_reduce(rho, l);
    check(p + "ρ̄", "3", numkit::to_dec(rhobar));
    check(p + "ρ̄ bits", "(11)_2", bits_msb_first(rhobar, l));
    check(p + "MSB(z)", k.msb_expected, numkit::bit(k.z, l) ? "1" : "0");
  }

  // Both examples present the comparison with the same (wbar, rhobar), so
  // every chain value and the decision coincide for either epsilon.
  for (int eps : {+1, -1}) {
    auto chain = [&](const BigInt& w) {
      std::string s;
      for (const auto& v : protocol::dgk_chain_plaintexts(numkit::mod_reduce(w, l), c.rhobar, l, eps, BigInt(11))) {
        s += (s.empty() ? "" : ",") + numkit::to_dec(v);
      }
      return s;
    };
    std::string e = "epsilon = " + std::string(eps > 0 ? "+1" : "-1");
    check("Examples 1/2: chain c_j (u = 11), " + e, chain(c.w0), chain(c.w1));
  }
  check("Examples 1/2: (w̄, ρ̄)", "(2, 3)",
        "(" + numkit::to_dec(c.wbar) + ", " + numkit::to_dec(c.rhobar) + ")");

  out.all_ok = true;
  for (const auto& line : out.lines) out.all_ok = out.all_ok && line.ok;
  return out;
}

}  // namespace lbscrypt::attacks
