#pragma once

#include "lbscrypt/dgk.hpp"
#include "lbscrypt/numkit.hpp"
#include "lbscrypt/protocol.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// Cryptanalysis of the comparison protocol: the MSB collision behind the
// wrong decisions, location recovery from leaked differences, and the
// factoring attack on multiplicatively masked differences.
namespace lbscrypt::attacks {

using protocol::GridPoint;

// ---------------------------------------------------------------------------
// Correctness flaw
// ---------------------------------------------------------------------------

/// Two values of z that differ only in bit l and are indistinguishable
/// after reduction mod 2^l.
struct MsbCollision {
  unsigned l = 0;
  BigInt rho;
  BigInt z0;  // bit l clear
  BigInt z1;  // z0 + 2^l
  BigInt w0;
  BigInt w1;
  BigInt wbar;
  BigInt rhobar;
};

/// Requires l >= 1, rho >= 0 and 0 <= z0 < 2^l.
MsbCollision build_msb_collision(unsigned l, const BigInt& rho, const BigInt& z0 = 0);

struct FlawConfig {
  unsigned l = 20;
  unsigned k_sec = 40;
  BigInt m = 0;  // 0 selects 2^l - 1
  dgk::Backend dgk_backend = dgk::Backend::transparent;
  unsigned dgk_bits = 512;
  unsigned workers = 1;
};

struct FlawCounterexample {
  std::string label;
  BigInt z;
  BigInt z_prime;
  BigInt rho;
  BigInt wbar;
  BigInt rhobar;
  int epsilon = 1;
  bool decision = false;
  bool decision_prime = false;
  bool truth = false;        // bit l of z
  bool truth_prime = false;  // bit l of z_prime
};

struct FlawReport {
  std::uint64_t trials = 0;
  unsigned l = 0;
  unsigned k_sec = 0;
  BigInt m;
  std::uint64_t agreements = 0;
  double agreement_rate = 0.0;
  std::uint64_t control_agreements = 0;  // MSB of the decrypted z, same inputs
  double control_agreement_rate = 0.0;
  std::uint64_t equal_distance_trials = 0;
  std::vector<FlawCounterexample> counterexamples;
  std::string decision_rule_note;
};

/// Runs the bitwise comparison on uniform d_a, d_b in [0, m] with fresh rho
/// and epsilon per trial. Trial i draws from SeededRng::derive(master, i)
/// where master is taken from `rng`, so the result does not depend on the
/// worker count.
FlawReport demonstrate_flaw(const FlawConfig& cfg, std::uint64_t trials, numkit::SeededRng& rng);

/// Runs the reduce/combine/decide chain on a known w = z + rho with fixed
/// epsilon, under the given keys.
bool comparison_decision(const BigInt& z, const BigInt& rho, unsigned l, int epsilon, const she::Keypair& she_keys,
                         const dgk::Keypair& dgk_keys, numkit::SeededRng& rng);

// ---------------------------------------------------------------------------
// Location recovery
// ---------------------------------------------------------------------------

/// delta[{i, j}] = d_i - d_j for i < j.
using DifferenceSet = std::map<std::pair<std::size_t, std::size_t>, BigInt>;

DifferenceSet recover_differences_from_z(const std::map<std::pair<std::size_t, std::size_t>, BigInt>& z, unsigned l);

struct VirtualLocation {
  Rational tx;
  Rational ty;
};

/// Radical-axis system over the given (scaled) POIs. Throws AttackError with
/// stage "virtual_location" and a message starting with "underdetermined" or
/// "inconsistent".
VirtualLocation recover_virtual_location(const DifferenceSet& deltas, const std::vector<GridPoint>& pois);

/// d_0 from the circle at POI 0, d_i = d_0 - delta_{0i}; every delta is
/// cross-checked. Throws AttackError (stage "distances") on mismatch.
std::vector<Rational> recover_distances(const DifferenceSet& deltas, const VirtualLocation& loc,
                                        const std::vector<GridPoint>& pois);

struct UserLocation {
  bool virtual_only = false;
  BigInt tx;
  BigInt ty;
  std::optional<GridPoint> location;  // absent when virtual_only
};

/// X_a = T_x - sum(history x). With history_known == false only T is
/// reported.
UserLocation invert_moving_average(const BigInt& tx, const BigInt& ty, const std::vector<GridPoint>& history,
                                   unsigned t, bool history_known = true);

// ---------------------------------------------------------------------------
// Masked differences
// ---------------------------------------------------------------------------

/// {sign(z) * d : d | z, 1 <= d <= m}, or {0} for z = 0. With
/// signed_mask both signs are returned. Sorted ascending.
std::vector<BigInt> unmask_difference(const BigInt& z, const BigInt& m, bool signed_mask = false);

struct PairCandidates {
  std::size_t a = 0;
  std::size_t b = 0;
  BigInt z;
  std::vector<BigInt> candidates;
  std::vector<BigInt> survivors;  // values seen in at least one surviving assignment
};

struct MaskCandidateSet {
  std::size_t n = 0;
  std::vector<PairCandidates> pairs;  // (0,1), (0,2), ..., (n-2,n-1)
  // Optional POIs on the distance grid. When present and not all collinear,
  // two differences fix the integer virtual location and with it every other.
  std::vector<GridPoint> anchors;
};

MaskCandidateSet build_candidates(std::size_t n, const std::map<std::pair<std::size_t, std::size_t>, BigInt>& z,
                                  const BigInt& m, bool signed_mask);

struct FilterResult {
  std::vector<DifferenceSet> assignments;
  bool unique = false;
  bool partial = false;  // node budget hit before the search finished
  std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 1000000;

/// Depth-first over d_j = -delta_{0j}; any pair (i, j) whose implied
/// difference d_i - d_j is not a candidate prunes the branch. With
/// anchors, only assignments realised by an integer grid point survive.
/// Fills `survivors` in `set`.
FilterResult consistency_filter(MaskCandidateSet& set, std::uint64_t node_budget = kDefaultNodeBudget);

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

struct LocationCandidate {
  DifferenceSet deltas;
  BigInt tx;
  BigInt ty;
  std::vector<BigInt> distances;
  std::optional<GridPoint> location;
};

struct RecoveryReport {
  std::string source;  // "z-leak" or "masked"
  bool virtual_only = false;
  DifferenceSet differences;  // the recovered set when unique
  std::optional<VirtualLocation> virtual_location;
  std::vector<BigInt> distances;
  std::optional<GridPoint> user_location;

  std::vector<LocationCandidate> candidates;
  std::optional<MaskCandidateSet> mask_candidates;
  std::size_t surviving_assignments = 0;
  bool unique = false;
  bool partial = false;

  // Against the simulator's sidecar.
  bool differences_match = false;
  bool true_assignment_survived = false;
  bool virtual_location_match = false;
  bool distances_match = false;
  bool location_match = false;
  bool sidecar_among_candidates = false;
};

struct PipelineOptions {
  std::uint64_t node_budget = kDefaultNodeBudget;
  bool require_z_leak = false;
};

/// Uses only the attacker-visible parts of the transcript (public view and
/// the z values the LBS decrypted); the sidecar only fills the match flags.
RecoveryReport full_attack_pipeline(const protocol::QueryTranscript& tr, const PipelineOptions& opts = {});

// ---------------------------------------------------------------------------
// Worked examples
// ---------------------------------------------------------------------------

struct ExampleLine {
  std::string label;
  std::string expected;
  std::string actual;
  bool ok = false;
};

struct WorkedExamples {
  std::vector<ExampleLine> lines;
  bool all_ok = false;
};

/// Recomputes Examples 1 and 2 (z = 3 and z = 7 with l = 2, rho = 31).
WorkedExamples run_worked_examples();

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline constexpr const char* kFlawFormat = "lbscrypt-flaw/1";
inline constexpr const char* kRecoveryFormat = "lbscrypt-recovery/1";
inline constexpr const char* kUnmaskFormat = "lbscrypt-unmask/1";

std::string flaw_report_to_json(const FlawReport& r, const nlohmann::ordered_json& manifest);
std::string recovery_report_to_json(const RecoveryReport& r, const nlohmann::ordered_json& manifest);
struct UnmaskEntry {
  BigInt z;
  std::vector<BigInt> candidates;
};

std::string unmask_report_to_json(const std::vector<UnmaskEntry>& entries, const BigInt& m, bool signed_mask,
                                  const nlohmann::ordered_json& manifest);

}  // namespace lbscrypt::attacks
