#include "lbscrypt/attacks.hpp"
#include "lbscrypt/errors.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>

using namespace lbscrypt;
using namespace lbscrypt::attacks;
using protocol::GridPoint;
using numkit::SeededRng;

namespace {

using PairMap = std::map<std::pair<std::size_t, std::size_t>, BigInt>;

const std::vector<GridPoint> kTriangle{{0, 0}, {10, 0}, {0, 10}};

DifferenceSet triangle_deltas() { return {{{0, 1}, -40}, {{0, 2}, -20}, {{1, 2}, 20}}; }

std::string stage_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const AttackError& e) {
    return e.stage() + " | " + e.what();
  }
  return "no error";
}

bool collinear(const std::vector<GridPoint>& pts) {
  for (std::size_t k = 2; k < pts.size(); ++k) {
    BigInt cross = (pts[1].x - pts[0].x) * (pts[k].y - pts[0].y) - (pts[1].y - pts[0].y) * (pts[k].x - pts[0].x);
    if (cross != 0) return false;
  }
  return true;
}

// Independent decision oracle for one comparison: integer chain values, so
// "zero" needs no modulus.
bool rule_decision(int z, int rho, unsigned l, int eps) {
  int wbar = (z + rho) & ((1 << l) - 1), rbar = rho & ((1 << l) - 1);
  int suffix = 0;
  bool zero = false;
  for (int j = static_cast<int>(l) - 1; j >= 0; --j) {
    int wb = (wbar >> j) & 1, rb = (rbar >> j) & 1;
    zero |= wb - rb + eps + 3 * suffix == 0;
    suffix += wb ^ rb;
  }
  return zero;
}

double exact_agreement(unsigned l, unsigned k) {
  const int m = (1 << l) - 1, rho_top = 1 << (k + l + 1);
  long agree = 0, total = 0;
  for (int da = 0; da <= m; ++da) {
    for (int db = 0; db <= m; ++db) {
      int z = (1 << l) + da - db;
      for (int rho = 0; rho < rho_top; ++rho) {
        for (int eps : {-1, 1}) {
          agree += rule_decision(z, rho, l, eps) == (da >= db);
          ++total;
        }
      }
    }
  }
  return static_cast<double>(agree) / static_cast<double>(total);
}

protocol::ScenarioConfig random_scene(SeededRng& rng, protocol::Mode mode, std::size_t n, const BigInt& d,
                                      const BigInt& coord_max) {
  for (;;) {
    protocol::ScenarioConfig cfg;
    cfg.t = 2 + static_cast<unsigned>(numkit::rand_u64_below(rng, 3));
    cfg.world_diameter = d;
    auto point = [&] { return GridPoint{numkit::rand_range(rng, 0, coord_max), numkit::rand_range(rng, 0, coord_max)}; };
    cfg.user_location = point();
    for (unsigned i = 1; i < cfg.t; ++i) cfg.history.push_back(point());
    for (std::size_t i = 0; i < n; ++i) cfg.pois.push_back(point());
    cfg.k_nn = 1;
    cfg.seed = rng.next_u64();
    cfg.mode = mode;
    cfg.leak_z = mode != protocol::Mode::masked;
    cfg.mask_range = 1000000;
    if (!collinear(cfg.pois)) return cfg;
  }
}

DifferenceSet true_deltas(const std::vector<BigInt>& d) {
  DifferenceSet out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) out[{i, j}] = d[i] - d[j];
  }
  return out;
}

}  // namespace

TEST(MsbCollision, WorkedExamplePair) {
  MsbCollision c = build_msb_collision(2, 31, 3);
  EXPECT_EQ(c.z0, 3);
  EXPECT_EQ(c.z1, 7);
  EXPECT_EQ(c.w0, 34);
  EXPECT_EQ(c.w1, 38);
  EXPECT_EQ(c.wbar, 2);
  EXPECT_EQ(c.rhobar, 3);
  EXPECT_FALSE(numkit::bit(c.z0, 2));
  EXPECT_TRUE(numkit::bit(c.z1, 2));
}

TEST(MsbCollision, MinimalCase) {
  MsbCollision c = build_msb_collision(1, 0, 0);
  EXPECT_EQ(c.z1, 2);
  EXPECT_EQ(c.wbar, 0);
  EXPECT_EQ(c.rhobar, 0);
  EXPECT_THROW(build_msb_collision(0, 0), ValidationError);
  EXPECT_THROW(build_msb_collision(2, -1), ValidationError);
  EXPECT_THROW(build_msb_collision(2, 0, 4), ValidationError);
}

TEST(MsbCollision, RandomDraws) {
  SeededRng rng(1);
  for (int i = 0; i < 1000; ++i) {
    unsigned l = 1 + static_cast<unsigned>(numkit::rand_u64_below(rng, 64));
    BigInt rho = numkit::rand_bits(rng, l + 41), z0 = numkit::rand_below(rng, numkit::pow2(l));
    MsbCollision c = build_msb_collision(l, rho, z0);
    ASSERT_EQ(c.z1, c.z0 + numkit::pow2(l));
    ASSERT_LT(c.z1, numkit::pow2(l + 1));
    ASSERT_EQ(numkit::mod_reduce(c.z0 + rho, l), numkit::mod_reduce(c.z1 + rho, l));
    ASSERT_NE(numkit::bit(c.z0, l), numkit::bit(c.z1, l));
  }
}

TEST(MsbCollision, CompletenessExhaustive) {
  // Every (wbar, rhobar) reachable from some zbar is reachable with either MSB.
  for (unsigned l = 1; l <= 6; ++l) {
    const unsigned top = 1u << l;
    for (unsigned zbar = 0; zbar < top; ++zbar) {
      for (unsigned rho = 0; rho < 4 * top; ++rho) {
        MsbCollision c = build_msb_collision(l, rho, zbar);
        ASSERT_EQ(c.wbar, (zbar + rho) % top);
        ASSERT_EQ(c.rhobar, rho % top);
        ASSERT_EQ(numkit::mod_reduce(c.w0, l), numkit::mod_reduce(c.w1, l));
        ASSERT_FALSE(numkit::bit(c.z0, l));
        ASSERT_TRUE(numkit::bit(c.z1, l));
      }
    }
  }
}

TEST(Flaw, WorkedPairDecidesIdentically) {
  SeededRng rng(2);
  she::SheParams sp;
  sp.plain_modulus = numkit::next_prime(numkit::pow2(50));
  auto she_keys = she::keygen(sp, rng);
  auto dgk_keys = dgk::keygen(dgk::Backend::group, 256, 11, rng);
  for (int eps : {-1, 1}) {
    bool d3 = comparison_decision(3, 31, 2, eps, she_keys, dgk_keys, rng);
    bool d7 = comparison_decision(7, 31, 2, eps, she_keys, dgk_keys, rng);
    EXPECT_EQ(d3, d7);
    EXPECT_EQ(d3, eps > 0);  // rhobar = 3 > wbar = 2
  }
}

TEST(Flaw, MatchesExhaustiveOracleAtSmallL) {
  const double exact = exact_agreement(3, 2);
  FlawConfig cfg;
  cfg.l = 3;
  cfg.k_sec = 2;
  SeededRng rng(3);
  FlawReport r = demonstrate_flaw(cfg, 40000, rng);
  EXPECT_EQ(r.trials, 40000u);
  EXPECT_EQ(r.m, 7);
  EXPECT_NEAR(r.agreement_rate, exact, 0.01);
  EXPECT_LT(r.agreement_rate, 0.95);
  EXPECT_EQ(r.control_agreement_rate, 1.0);
  EXPECT_FALSE(r.decision_rule_note.empty());
}

TEST(Flaw, ReportCarriesCounterexamples) {
  FlawConfig cfg;
  cfg.l = 20;
  SeededRng rng(4);
  FlawReport r = demonstrate_flaw(cfg, 200, rng);
  ASSERT_FALSE(r.counterexamples.empty());
  bool worked = false;
  for (const auto& c : r.counterexamples) {
    EXPECT_EQ(c.decision, c.decision_prime) << c.label;
    EXPECT_NE(c.truth, c.truth_prime) << c.label;
    unsigned l = c.z == 3 ? 2 : r.l;
    EXPECT_EQ(numkit::mod_reduce(c.z + c.rho, l), numkit::mod_reduce(c.z_prime + c.rho, l));
    EXPECT_EQ(c.wbar, numkit::mod_reduce(c.z + c.rho, l));
    if (c.z == 3 && c.z_prime == 7 && c.rho == 31) {
      worked = true;
      EXPECT_EQ(c.wbar, 2);
      EXPECT_EQ(c.rhobar, 3);
    }
  }
  EXPECT_TRUE(worked);
}

TEST(Flaw, IndependentOfWorkerCount) {
  FlawConfig cfg;
  cfg.l = 8;
  cfg.k_sec = 8;
  SeededRng a(5), b(5);
  cfg.workers = 1;
  FlawReport r1 = demonstrate_flaw(cfg, 3000, a);
  cfg.workers = 3;
  FlawReport r3 = demonstrate_flaw(cfg, 3000, b);
  EXPECT_EQ(r1.agreements, r3.agreements);
  EXPECT_EQ(r1.equal_distance_trials, r3.equal_distance_trials);
  EXPECT_THROW(demonstrate_flaw(cfg, 0, a), ValidationError);
}

TEST(Flaw, GroupBackendAgrees) {
  FlawConfig cfg;
  cfg.l = 3;
  cfg.k_sec = 2;
  SeededRng a(6), b(6);
  FlawReport t = demonstrate_flaw(cfg, 300, a);
  cfg.dgk_backend = dgk::Backend::group;
  cfg.dgk_bits = 256;
  FlawReport g = demonstrate_flaw(cfg, 300, b);
  EXPECT_EQ(t.agreements, g.agreements);
}

TEST(Locate, DifferencesFromZ) {
  PairMap z{{{0, 1}, 3}, {{0, 2}, 4}, {{1, 2}, 7}};
  DifferenceSet d = recover_differences_from_z(z, 2);
  EXPECT_EQ(d.at({0, 1}), -1);
  EXPECT_EQ(d.at({0, 2}), 0);
  EXPECT_EQ(d.at({1, 2}), 3);
}

TEST(Locate, TriangleExample) {
  VirtualLocation v = recover_virtual_location(triangle_deltas(), kTriangle);
  EXPECT_EQ(v.tx, 3);
  EXPECT_EQ(v.ty, 4);
  auto d = recover_distances(triangle_deltas(), v, kTriangle);
  EXPECT_EQ(d, (std::vector<Rational>{25, 65, 45}));
  DifferenceSet partial{{{0, 1}, -40}, {{0, 2}, -20}};
  VirtualLocation v2 = recover_virtual_location(partial, kTriangle);
  EXPECT_EQ(v2.tx, 3);
  EXPECT_EQ(v2.ty, 4);
}

TEST(Locate, LocationOnAPoi) {
  DifferenceSet deltas{{{0, 1}, -100}, {{0, 2}, -100}, {{1, 2}, 0}};
  VirtualLocation v = recover_virtual_location(deltas, kTriangle);
  EXPECT_EQ(v.tx, 0);
  EXPECT_EQ(v.ty, 0);
  EXPECT_EQ(recover_distances(deltas, v, kTriangle), (std::vector<Rational>{0, 100, 100}));
}

TEST(Locate, Equidistant) {
  std::vector<GridPoint> pois{{5, 0}, {0, 5}, {-5, 0}, {3, 4}};
  DifferenceSet deltas;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) deltas[{i, j}] = 0;
  }
  VirtualLocation v = recover_virtual_location(deltas, pois);
  EXPECT_EQ(v.tx, 0);
  EXPECT_EQ(v.ty, 0);
  EXPECT_EQ(recover_distances(deltas, v, pois), (std::vector<Rational>(4, 25)));
}

TEST(Locate, FailuresAreLabelled) {
  std::vector<GridPoint> line{{0, 0}, {1, 0}, {2, 0}};
  DifferenceSet dl{{{0, 1}, -1}, {{0, 2}, -4}, {{1, 2}, -3}};
  std::string s = stage_of([&] { recover_virtual_location(dl, line); });
  EXPECT_EQ(s.rfind("virtual_location | virtual_location: underdetermined", 0), 0u) << s;

  std::vector<GridPoint> four{{0, 0}, {10, 0}, {0, 10}, {10, 10}};
  DifferenceSet bad{{{0, 1}, -40}, {{0, 2}, -20}, {{0, 3}, -7}};
  s = stage_of([&] { recover_virtual_location(bad, four); });
  EXPECT_EQ(s.rfind("virtual_location | virtual_location: inconsistent", 0), 0u) << s;

  DifferenceSet corrupted = triangle_deltas();
  corrupted[{1, 2}] = 21;
  s = stage_of([&] { recover_distances(corrupted, {3, 4}, kTriangle); });
  EXPECT_EQ(s.rfind("distances", 0), 0u) << s;
}

TEST(Locate, ExactOnRandomScenes) {
  SeededRng rng(7);
  int checked = 0;
  while (checked < 1000) {
    std::size_t n = 3 + numkit::rand_u64_below(rng, 5);
    std::vector<GridPoint> pois;
    for (std::size_t i = 0; i < n; ++i) pois.push_back({numkit::rand_range(rng, -5000, 5000), numkit::rand_range(rng, -5000, 5000)});
    if (collinear(pois)) continue;
    GridPoint t{numkit::rand_range(rng, -5000, 5000), numkit::rand_range(rng, -5000, 5000)};
    std::vector<BigInt> d;
    for (const auto& p : pois) d.push_back(protocol::squared_distance(t, p));
    DifferenceSet deltas = true_deltas(d);
    VirtualLocation v = recover_virtual_location(deltas, pois);
    ASSERT_EQ(v.tx, Rational(t.x));
    ASSERT_EQ(v.ty, Rational(t.y));
    auto rd = recover_distances(deltas, v, pois);
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(rd[i], Rational(d[i]));
    ++checked;
  }
}

TEST(Locate, MovingAverageInversion) {
  UserLocation u = invert_moving_average(18, 6, {{5, 2}, {7, 3}}, 3);
  ASSERT_TRUE(u.location);
  EXPECT_EQ(*u.location, (GridPoint{6, 1}));
  EXPECT_FALSE(u.virtual_only);
  UserLocation sym = invert_moving_average(10, 14, {{5, 7}}, 2);
  EXPECT_EQ(*sym.location, (GridPoint{5, 7}));
  UserLocation vo = invert_moving_average(18, 6, {}, 3, false);
  EXPECT_TRUE(vo.virtual_only);
  EXPECT_FALSE(vo.location);
  EXPECT_EQ(vo.tx, 18);
  EXPECT_EQ(stage_of([] { invert_moving_average(18, 6, {{5, 2}}, 3); }).rfind("moving_average", 0), 0u);
}

TEST(Unmask, Examples) {
  EXPECT_EQ(unmask_difference(0, 100), (std::vector<BigInt>{0}));
  std::vector<BigInt> pos{1, 2, 3, 5, 6, 7, 10, 14, 15, 21, 30, 35, 42, 70};
  EXPECT_EQ(unmask_difference(210, 100), pos);
  std::vector<BigInt> neg;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) neg.push_back(-*it);
  EXPECT_EQ(unmask_difference(-210, 100), neg);
  auto both = unmask_difference(210, 100, true);
  EXPECT_EQ(both.size(), 28u);
  EXPECT_TRUE(std::is_sorted(both.begin(), both.end()));
  EXPECT_THROW(unmask_difference(5, 0), ValidationError);
}

TEST(Unmask, SoundnessRandomized) {
  SeededRng rng(8);
  for (int i = 0; i < 2000; ++i) {
    BigInt m = numkit::rand_range(rng, 1, 1000000);
    BigInt delta = numkit::rand_range(rng, -m, m);
    BigInt r = numkit::rand_range(rng, 1, 1000000000);
    auto cands = unmask_difference(delta * r, m);
    ASSERT_TRUE(std::binary_search(cands.begin(), cands.end(), delta));
    for (const auto& c : cands) {
      ASSERT_LE(abs(c), m);
      if (c != 0) ASSERT_EQ((delta * r) % c, 0);
    }
    bool neg = numkit::rand_u64_below(rng, 2);
    auto s = unmask_difference(delta * r * (neg ? -1 : 1), m, true);
    ASSERT_TRUE(std::binary_search(s.begin(), s.end(), neg ? -delta : delta));
    ASSERT_TRUE(std::binary_search(s.begin(), s.end(), neg ? delta : -delta) || delta == 0);
  }
}

TEST(Filter, SingletonAndDecoy) {
  PairMap z{{{0, 1}, -40}, {{0, 2}, -20}, {{1, 2}, 20}};
  MaskCandidateSet set = build_candidates(3, z, 1, false);
  set.pairs[0].candidates = {-40};
  set.pairs[1].candidates = {-20};
  set.pairs[2].candidates = {20};
  FilterResult r = consistency_filter(set);
  EXPECT_TRUE(r.unique);
  ASSERT_EQ(r.assignments.size(), 1u);
  EXPECT_EQ(r.assignments[0], triangle_deltas());

  set.pairs[2].candidates = {7, 20};  // 7 closes no triangle
  r = consistency_filter(set);
  EXPECT_TRUE(r.unique);
  EXPECT_EQ(set.pairs[2].survivors, (std::vector<BigInt>{20}));
}

TEST(Filter, BudgetMarksPartial) {
  // Highly composite z values give large candidate sets.
  PairMap z;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = i + 1; j < 6; ++j) z[{i, j}] = 720720;
  }
  MaskCandidateSet set = build_candidates(6, z, 720720, true);
  FilterResult r = consistency_filter(set, 50);
  EXPECT_TRUE(r.partial);
  EXPECT_FALSE(r.unique);
  EXPECT_LE(r.nodes, 51u);
}

TEST(Filter, SoundnessAndMonotonicity) {
  SeededRng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5;
    const BigInt m = 10000;
    std::vector<BigInt> d;
    for (std::size_t i = 0; i < n; ++i) d.push_back(numkit::rand_range(rng, 0, m));
    DifferenceSet truth = true_deltas(d);
    PairMap z;
    for (const auto& [k, v] : truth) z[k] = v * numkit::rand_range(rng, 1, 1000000);
    MaskCandidateSet set = build_candidates(n, z, m, false);
    FilterResult r = consistency_filter(set);
    ASSERT_FALSE(r.partial);
    ASSERT_NE(std::find(r.assignments.begin(), r.assignments.end(), truth), r.assignments.end());
    for (const auto& pc : set.pairs) {
      for (const auto& s : pc.survivors) ASSERT_TRUE(std::binary_search(pc.candidates.begin(), pc.candidates.end(), s));
      ASSERT_TRUE(std::binary_search(pc.survivors.begin(), pc.survivors.end(), truth.at({pc.a, pc.b})));
    }
    for (const auto& a : r.assignments) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          for (std::size_t k = j + 1; k < n; ++k) ASSERT_EQ(a.at({i, j}) + a.at({j, k}), a.at({i, k}));
        }
      }
    }

    // Survivors for the first n - 1 POIs, then for all n projected down.
    PairMap z4;
    for (const auto& [k, v] : z) {
      if (k.second < n - 1) z4[k] = v;
    }
    MaskCandidateSet set4 = build_candidates(n - 1, z4, m, false);
    FilterResult r4 = consistency_filter(set4);
    std::set<DifferenceSet> small(r4.assignments.begin(), r4.assignments.end()), projected;
    for (const auto& a : r.assignments) {
      DifferenceSet p;
      for (const auto& [k, v] : a) {
        if (k.second < n - 1) p[k] = v;
      }
      projected.insert(p);
    }
    for (const auto& p : projected) ASSERT_TRUE(small.count(p));
    ASSERT_LE(projected.size(), small.size());
  }
}

TEST(Filter, AnchorsKeepOnlyRealisableAssignments) {
  SeededRng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5;
    std::vector<GridPoint> pois;
    for (std::size_t i = 0; i < n; ++i) pois.push_back({numkit::rand_range(rng, 0, 992), numkit::rand_range(rng, 0, 992)});
    if (collinear(pois)) continue;
    const GridPoint t{numkit::rand_range(rng, 0, 992), numkit::rand_range(rng, 0, 992)};
    std::vector<BigInt> d;
    for (const auto& p : pois) d.push_back(protocol::squared_distance(t, p));
    const BigInt m = 992 * 992 * 2;
    DifferenceSet truth = true_deltas(d);
    PairMap z;
    for (const auto& [k, v] : truth) z[k] = v * numkit::rand_range(rng, 1, 1000000000);
    MaskCandidateSet set = build_candidates(n, z, m, false);
    set.anchors = pois;
    FilterResult r = consistency_filter(set);
    ASSERT_FALSE(r.partial);
    ASSERT_NE(std::find(r.assignments.begin(), r.assignments.end(), truth), r.assignments.end());
    for (const auto& a : r.assignments) {
      const VirtualLocation v = recover_virtual_location(a, pois);
      ASSERT_EQ(v.tx.get_den(), 1);
      ASSERT_EQ(v.ty.get_den(), 1);
    }
  }
}

TEST(Filter, AnchorsMustMatchPoiCount) {
  MaskCandidateSet set = build_candidates(3, {{{0, 1}, 1}, {{0, 2}, 1}, {{1, 2}, 1}}, 5, false);
  set.anchors = {{0, 0}, {1, 0}};
  EXPECT_EQ(stage_of([&] { consistency_filter(set); }), "filter | filter: anchors must list one point per POI");
}

TEST(Pipeline, ZLeakRecoversExactLocation) {
  SeededRng rng(10);
  for (int s = 0; s < 30; ++s) {
    auto cfg = random_scene(rng, protocol::Mode::faithful, 3 + s % 6, 10000, 7000);
    auto tr = protocol::run_full_query(cfg);
    RecoveryReport r = full_attack_pipeline(tr, {kDefaultNodeBudget, true});
    ASSERT_EQ(r.source, "z-leak");
    ASSERT_TRUE(r.unique);
    ASSERT_TRUE(r.differences_match);
    ASSERT_TRUE(r.virtual_location_match);
    ASSERT_TRUE(r.distances_match);
    ASSERT_TRUE(r.location_match);
    ASSERT_EQ(*r.user_location, cfg.user_location);
  }
}

TEST(Pipeline, MaskedTrueAssignmentSurvives) {
  SeededRng rng(11);
  int unique = 0;
  for (int s = 0; s < 30; ++s) {
    auto cfg = random_scene(rng, protocol::Mode::masked, 5, 25, 17);
    auto tr = protocol::run_full_query(cfg);
    ASSERT_LE(tr.view.m, 10000);
    RecoveryReport r = full_attack_pipeline(tr);
    ASSERT_EQ(r.source, "masked");
    ASSERT_FALSE(r.partial);
    ASSERT_TRUE(r.true_assignment_survived);
    ASSERT_TRUE(r.sidecar_among_candidates);
    if (r.unique) {
      ++unique;
      ASSERT_TRUE(r.location_match);
      ASSERT_EQ(*r.user_location, cfg.user_location);
    }
  }
  EXPECT_GT(unique, 0);
}

TEST(Pipeline, RandomHistoryIsVirtualOnly) {
  SeededRng rng(12);
  auto cfg = random_scene(rng, protocol::Mode::faithful, 4, 10000, 7000);
  cfg.history.clear();
  cfg.random_history = true;
  auto tr = protocol::run_full_query(cfg);
  RecoveryReport r = full_attack_pipeline(tr);
  EXPECT_TRUE(r.virtual_only);
  EXPECT_FALSE(r.user_location);
  EXPECT_TRUE(r.virtual_location_match);
}

TEST(Pipeline, RequiresLeakedZ) {
  SeededRng rng(13);
  auto cfg = random_scene(rng, protocol::Mode::faithful, 4, 10000, 7000);
  cfg.leak_z = false;
  auto tr = protocol::run_full_query(cfg);
  EXPECT_EQ(stage_of([&] { full_attack_pipeline(tr); }).rfind("pipeline", 0), 0u);
  auto masked = protocol::run_full_query(random_scene(rng, protocol::Mode::masked, 4, 25, 17));
  EXPECT_EQ(stage_of([&] { full_attack_pipeline(masked, {kDefaultNodeBudget, true}); }).rfind("pipeline", 0), 0u);
}

TEST(Reports, FormatTags) {
  nlohmann::ordered_json man = {{"command", "test"}};
  SeededRng rng(14);
  FlawConfig cfg;
  cfg.l = 4;
  auto flaw = nlohmann::json::parse(flaw_report_to_json(demonstrate_flaw(cfg, 10, rng), man));
  EXPECT_EQ(flaw["format"], kFlawFormat);
  auto un = nlohmann::json::parse(unmask_report_to_json({{210, unmask_difference(210, 100)}}, 100, false, man));
  EXPECT_EQ(un["format"], kUnmaskFormat);
  auto tr = protocol::run_full_query(random_scene(rng, protocol::Mode::masked, 4, 25, 17));
  auto rec = nlohmann::json::parse(recovery_report_to_json(full_attack_pipeline(tr), man));
  EXPECT_EQ(rec["format"], kRecoveryFormat);
}

TEST(WorkedExamplesCheck, AllLinesVerified) {
  WorkedExamples ex = run_worked_examples();
  EXPECT_TRUE(ex.all_ok);
  for (const auto& line : ex.lines) EXPECT_TRUE(line.ok) << line.label << " = " << line.actual;
  auto has = [&](const std::string& label, const std::string& value) {
    return std::any_of(ex.lines.begin(), ex.lines.end(),
                       [&](const ExampleLine& l) { return l.label.find(label) != std::string::npos && l.actual == value; });
  };
  EXPECT_TRUE(has("Example 1: w", "34"));
  EXPECT_TRUE(has("Example 2: w", "38"));
}
