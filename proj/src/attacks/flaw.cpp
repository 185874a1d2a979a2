#include "lbscrypt/attacks.hpp"
#include "lbscrypt/errors.hpp"

#include <algorithm>
#include <thread>

namespace lbscrypt::attacks {

namespace {

struct FlawKeys {
  she::Keypair she;
  dgk::Keypair dgk;
};

FlawKeys make_keys(unsigned l, unsigned k_sec, dgk::Backend backend, unsigned dgk_bits, numkit::SeededRng& rng) {
  she::SheParams params;
  params.plain_modulus = numkit::next_prime(numkit::pow2(k_sec + l + 4));
  params.backend = she::Backend::transparent;
  params.max_depth = 2;
  FlawKeys keys;
  keys.she = she::keygen(params, rng);
  keys.dgk = dgk::keygen(backend, dgk_bits, numkit::next_prime(BigInt(3 * l + 3)), rng);
  return keys;
}

struct Tally {
  std::uint64_t agree = 0;
  std::uint64_t control = 0;
  std::uint64_t equal = 0;
};

Tally run_trials(const FlawConfig& cfg, const BigInt& m, const FlawKeys& keys, std::uint64_t master,
                 std::uint64_t begin, std::uint64_t end) {
  Tally t;
  for (std::uint64_t i = begin; i < end; ++i) {
    numkit::SeededRng rng = numkit::SeededRng::derive(master, i);
    BigInt d_a = numkit::rand_range(rng, 0, m);
    BigInt d_b = numkit::rand_range(rng, 0, m);
    int epsilon = numkit::rand_u64_below(rng, 2) == 0 ? -1 : 1;
    she::Ciphertext ca = she::encrypt(keys.she.pk, d_a, rng);
    she::Ciphertext cb = she::encrypt(keys.she.pk, d_b, rng);
    protocol::PreparedComparison prep = protocol::en_compare_prepare(ca, cb, cfg.l, cfg.k_sec, m, rng);
    protocol::ReducedW red = protocol::lbs_reduce_w(prep.w, *keys.she.sk, keys.dgk.pk, cfg.l, rng);
    protocol::BlindedComparison blind =
        protocol::en_dgk_combine(red.bits, numkit::mod_reduce(prep.rho, cfg.l), epsilon, rng);
    bool decision = protocol::lbs_decide(blind.blinded, *keys.dgk.sk);
    bool truth = d_a >= d_b;
    bool control = numkit::bit(she::decrypt(*keys.she.sk, prep.z), cfg.l);
    t.agree += decision == truth;
    t.control += control == truth;
    t.equal += d_a == d_b;
  }
  return t;
}

}  // namespace

MsbCollision build_msb_collision(unsigned l, const BigInt& rho, const BigInt& z0) {
  if (l == 0) throw ValidationError("l: must be >= 1");
  if (rho < 0) throw ValidationError("rho: must be >= 0");
  const BigInt two_l = numkit::pow2(l);
  if (z0 < 0 || z0 >= two_l) throw ValidationError("z0: must lie in [0, 2^l)");
  MsbCollision c;
  c.l = l;
  c.rho = rho;
  c.z0 = z0;
  c.z1 = z0 + two_l;
  c.w0 = c.z0 + rho;
  c.w1 = c.z1 + rho;
  c.wbar = numkit::mod_reduce(c.w0, l);
  c.rhobar = numkit::mod_reduce(rho, l);
  return c;
}

bool comparison_decision(const BigInt& z, const BigInt& rho, unsigned l, int epsilon, const she::Keypair& she_keys,
                         const dgk::Keypair& dgk_keys, numkit::SeededRng& rng) {
  she::Ciphertext w = she::encrypt(she_keys.pk, z + rho, rng);
  protocol::ReducedW red = protocol::lbs_reduce_w(w, *she_keys.sk, dgk_keys.pk, l, rng);
  protocol::BlindedComparison blind = protocol::en_dgk_combine(red.bits, numkit::mod_reduce(rho, l), epsilon, rng);
  return protocol::lbs_decide(blind.blinded, *dgk_keys.sk);
}

FlawReport demonstrate_flaw(const FlawConfig& cfg, std::uint64_t trials, numkit::SeededRng& rng) {
  if (trials == 0) throw ValidationError("trials: must be >= 1");
  if (cfg.l == 0) throw ValidationError("l: must be >= 1");
  const BigInt m = cfg.m == 0 ? numkit::pow2(cfg.l) - 1 : cfg.m;
  if (m < 0 || m > numkit::pow2(cfg.l)) throw ValidationError("m: must lie in [0, 2^l]");

  FlawReport r;
  r.trials = trials;
  r.l = cfg.l;
  r.k_sec = cfg.k_sec;
  r.m = m;

  const std::uint64_t master = rng.next_u64();
  numkit::SeededRng key_rng = numkit::SeededRng::derive(master, ~std::uint64_t{0});
  FlawKeys keys = make_keys(cfg.l, cfg.k_sec, cfg.dgk_backend, cfg.dgk_bits, key_rng);

  unsigned workers = std::max(1u, cfg.workers);
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, trials));
  std::vector<Tally> tallies(workers);
  if (workers == 1) {
    tallies[0] = run_trials(cfg, m, keys, master, 0, trials);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      std::uint64_t begin = trials * w / workers;
      std::uint64_t end = trials * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] { tallies[w] = run_trials(cfg, m, keys, master, begin, end); });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& t : tallies) {
    r.agreements += t.agree;
    r.control_agreements += t.control;
    r.equal_distance_trials += t.equal;
  }
  r.agreement_rate = static_cast<double>(r.agreements) / static_cast<double>(trials);
  r.control_agreement_rate = static_cast<double>(r.control_agreements) / static_cast<double>(trials);

  // Examples 1 and 2 run through the actual chain at l = 2 with both signs
  // of epsilon; then one collision at the configured l.
  numkit::SeededRng ex_rng = numkit::SeededRng::derive(master, ~std::uint64_t{0} - 1);
  FlawKeys small = make_keys(2, cfg.k_sec, cfg.dgk_backend, cfg.dgk_bits, ex_rng);
  auto add_example = [&](const std::string& label, const MsbCollision& c, int eps, const FlawKeys& k) {
    FlawCounterexample ce;
    ce.label = label;
    ce.z = c.z0;
    ce.z_prime = c.z1;
    ce.rho = c.rho;
    ce.wbar = c.wbar;
    ce.rhobar = c.rhobar;
    ce.epsilon = eps;
    ce.decision = comparison_decision(c.z0, c.rho, c.l, eps, k.she, k.dgk, ex_rng);
    ce.decision_prime = comparison_decision(c.z1, c.rho, c.l, eps, k.she, k.dgk, ex_rng);
    ce.truth = numkit::bit(c.z0, c.l);
    ce.truth_prime = numkit::bit(c.z1, c.l);
    r.counterexamples.push_back(ce);
  };
  MsbCollision examples = build_msb_collision(2, 31, 3);
  add_example("Example 1/2 (z = 3 vs z = 7, rho = 31, l = 2)", examples, +1, small);
  add_example("Example 1/2 (z = 3 vs z = 7, rho = 31, l = 2)", examples, -1, small);
  if (cfg.l != 2) {
    numkit::SeededRng pick = numkit::SeededRng::derive(master, ~std::uint64_t{0} - 2);
    BigInt rho = numkit::rand_bits(pick, cfg.k_sec + cfg.l + 1);
    BigInt z0 = numkit::rand_below(pick, numkit::pow2(cfg.l));
    add_example("random collision at l = " + std::to_string(cfg.l), build_msb_collision(cfg.l, rho, z0), +1, keys);
  }

  r.decision_rule_note =
      "decision = 'a zero is present', read as d_a >= d_b. A zero marks wbar > rhobar when epsilon = -1 and "
      "rhobar > wbar when epsilon = +1, so the rule's meaning flips with epsilon; independently, (wbar, rhobar) "
      "does not determine bit l of z.";
  return r;
}

}  // namespace lbscrypt::attacks
