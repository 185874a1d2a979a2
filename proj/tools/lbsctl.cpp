#include "lbscrypt/attacks.hpp"
#include "lbscrypt/errors.hpp"
#include "lbscrypt/protocol.hpp"
#include "lbscrypt/transcript.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

using namespace lbscrypt;

enum Exit { kOk = 0, kValidation = 2, kAttack = 3, kInternal = 4 };

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("out: cannot write '" + path + "'");
  out << text;
  if (!out) throw ValidationError("out: write to '" + path + "' failed");
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::string out;
  bool record_timing = false;
};

int cmd_simulate(const SimulateArgs& a) {
  auto start = std::chrono::steady_clock::now();
  protocol::ScenarioConfig cfg = protocol::load_scenario(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (!a.mode.empty()) cfg.mode = protocol::mode_from_string(a.mode);
  protocol::QueryTranscript tr = protocol::run_full_query(cfg);

  protocol::RunManifest man;
  man.command = "simulate";
  man.config_path = a.config;
  man.seed = cfg.seed;
  man.mode = protocol::to_string(cfg.mode);
  man.output_path = a.out;
  if (a.record_timing) {
    man.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  write_file(a.out, protocol::transcript_to_json(tr, man));

  std::vector<std::size_t> truth(tr.sidecar.brute_force_order.begin(),
                                 tr.sidecar.brute_force_order.begin() + static_cast<long>(cfg.k_nn));
  std::size_t correct = 0;
  for (const auto& c : tr.comparisons) correct += c.decision == c.truth;
  std::cout << "mode:        " << protocol::to_string(cfg.mode) << "\n"
            << "seed:        " << cfg.seed << "\n"
            << "pois:        " << cfg.pois.size() << "\n"
            << "k-NN:        " << join(tr.response.indices) << "\n"
            << "brute force: " << join(truth) << "\n"
            << "match:       " << (tr.response.indices == truth ? "yes" : "no") << "\n"
            << "decisions:   " << correct << "/" << tr.comparisons.size() << " correct\n";
  for (const auto& c : tr.comparisons) {
    std::cout << "  (" << c.a << "," << c.b << ") d_a=" << numkit::to_dec(c.d_a) << " d_b=" << numkit::to_dec(c.d_b)
              << " decision=" << (c.decision ? "d_a>=d_b" : "d_a<d_b") << (c.decision == c.truth ? "" : "  WRONG")
              << "\n";
  }
  std::cout << "transcript:  " << a.out << "\n";
  return kOk;
}

struct AttackArgs {
  std::string out;
  std::uint64_t seed = 1;
  std::uint64_t trials = 10000;
  unsigned l = 20;
  unsigned k_sec = 40;
  unsigned workers = 0;
  std::string dgk = "transparent";
  std::string transcript;
  std::vector<std::string> z;
  std::string m;
  bool signed_mask = false;
  std::uint64_t budget = attacks::kDefaultNodeBudget;
};

protocol::RunManifest attack_manifest(const std::string& name, const AttackArgs& a, const std::string& input,
                                      const std::string& mode) {
  protocol::RunManifest man;
  man.command = "attack " + name;
  man.config_path = input;
  man.seed = a.seed;
  man.mode = mode;
  man.output_path = a.out;
  return man;
}

int cmd_flaw(const AttackArgs& a) {
  attacks::FlawConfig cfg;
  cfg.l = a.l;
  cfg.k_sec = a.k_sec;
  cfg.dgk_backend = dgk::backend_from_string(a.dgk);
  cfg.workers = a.workers ? a.workers : std::max(1u, std::thread::hardware_concurrency());
  numkit::SeededRng rng(a.seed);
  attacks::FlawReport r = attacks::demonstrate_flaw(cfg, a.trials, rng);
  write_file(a.out, attacks::flaw_report_to_json(r, protocol::manifest_to_json(attack_manifest("flaw", a, "", "faithful"))));
  std::cout << "trials:          " << r.trials << " (l = " << r.l << ", k_sec = " << r.k_sec << ")\n"
            << "agreement rate:  " << r.agreement_rate << "\n"
            << "control rate:    " << r.control_agreement_rate << "\n";
  for (const auto& c : r.counterexamples) {
    std::cout << "  " << c.label << ", epsilon " << (c.epsilon > 0 ? "+1" : "-1") << ": w̄ = " << numkit::to_dec(c.wbar)
              << ", ρ̄ = " << numkit::to_dec(c.rhobar) << ", MSB " << c.truth << "/" << c.truth_prime
              << ", decisions " << c.decision << "/" << c.decision_prime << "\n";
  }
  std::cout << "report:          " << a.out << "\n";
  return kOk;
}

int cmd_recovery(const std::string& name, const AttackArgs& a, bool require_z_leak) {
  protocol::QueryTranscript tr = protocol::load_transcript(a.transcript);
  attacks::PipelineOptions opts;
  opts.node_budget = a.budget;
  opts.require_z_leak = require_z_leak;
  attacks::RecoveryReport r = attacks::full_attack_pipeline(tr, opts);
  auto man = attack_manifest(name, a, a.transcript, protocol::to_string(tr.view.mode));
  write_file(a.out, attacks::recovery_report_to_json(r, protocol::manifest_to_json(man)));
  std::cout << "source:       " << r.source << "\n"
            << "candidates:   " << r.candidates.size() << (r.partial ? " (partial search)" : "") << "\n";
  if (r.unique && r.user_location) {
    std::cout << "location:     (" << numkit::to_dec(r.user_location->x) << ", " << numkit::to_dec(r.user_location->y)
              << ")\n";
  }
  std::cout << "match:        " << (r.unique ? (r.location_match || (r.virtual_only && r.virtual_location_match))
                                             : r.sidecar_among_candidates)
            << "\n"
            << "report:       " << a.out << "\n";
  return kOk;
}

int cmd_unmask(const AttackArgs& a) {
  if (a.z.empty()) throw ValidationError("z: at least one value required");
  BigInt m = numkit::parse_bigint(a.m);
  std::vector<attacks::UnmaskEntry> entries;
  for (const auto& text : a.z) {
    attacks::UnmaskEntry e;
    e.z = numkit::parse_bigint(text);
    e.candidates = attacks::unmask_difference(e.z, m, a.signed_mask);
    std::cout << "z = " << numkit::to_dec(e.z) << ": " << e.candidates.size() << " candidates:";
    for (const auto& c : e.candidates) std::cout << " " << numkit::to_dec(c);
    std::cout << "\n";
    entries.push_back(std::move(e));
  }
  write_file(a.out, attacks::unmask_report_to_json(entries, m, a.signed_mask,
                                                   protocol::manifest_to_json(attack_manifest("unmask", a, "", ""))));
  return kOk;
}

int cmd_worked_examples() {
  attacks::WorkedExamples ex = attacks::run_worked_examples();
  for (const auto& line : ex.lines) {
    std::cout << line.label << " = " << line.actual;
    if (!line.ok) std::cout << "   MISMATCH (expected " << line.expected << ")";
    std::cout << "\n";
  }
  std::cout << (ex.all_ok ? "all values verified" : "verification FAILED") << "\n";
  return ex.all_ok ? kOk : kInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lbsctl: simulate the private k-NN protocol and run the attacks against it"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one query end to end and write its transcript");
  simulate->add_option("--config", sim.config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", sim.seed, "Override the scenario seed");
  simulate->add_option("--mode", sim.mode, "oracle | faithful | masked (overrides the scenario)")
      ->check(CLI::IsMember({"oracle", "faithful", "masked"}));
  simulate->add_option("--out", sim.out, "Transcript output path")->required();
  simulate->add_flag("--record-timing", sim.record_timing, "Store wall-clock duration in the manifest");

  AttackArgs att;
  auto* attack = app.add_subcommand("attack", "Run an attack and write its report");
  attack->require_subcommand(1);

  auto* flaw = attack->add_subcommand("flaw", "Measure decision agreement of the bitwise comparison");
  flaw->add_option("--trials", att.trials, "Number of trials")->check(CLI::PositiveNumber);
  flaw->add_option("--seed", att.seed, "Master seed");
  flaw->add_option("--l", att.l, "Comparison bit length")->check(CLI::Range(1u, 4096u));
  flaw->add_option("--k-sec", att.k_sec, "Statistical security parameter")->check(CLI::Range(1u, 4096u));
  flaw->add_option("--workers", att.workers, "Worker threads (0 = hardware)");
  flaw->add_option("--dgk", att.dgk, "transparent | group")->check(CLI::IsMember({"transparent", "group"}));
  flaw->add_option("--out", att.out, "Report path")->required();

  auto* locate = attack->add_subcommand("locate", "Recover the user location from a z-leak transcript");
  locate->add_option("--transcript", att.transcript, "Transcript path")->required()->check(CLI::ExistingFile);
  locate->add_option("--out", att.out, "Report path")->required();

  auto* unmask = attack->add_subcommand("unmask", "List candidate differences for masked z values");
  unmask->add_option("--z", att.z, "Masked value (repeatable)")->required();
  unmask->add_option("--m", att.m, "Distance bound")->required();
  unmask->add_flag("--signed", att.signed_mask, "Mask may be negative");
  unmask->add_option("--out", att.out, "Report path")->required();

  auto* pipeline = attack->add_subcommand("pipeline", "Full recovery from a masked or z-leak transcript");
  pipeline->add_option("--transcript", att.transcript, "Transcript path")->required()->check(CLI::ExistingFile);
  pipeline->add_option("--budget", att.budget, "Consistency-filter node budget");
  pipeline->add_option("--out", att.out, "Report path")->required();

  auto* examples = app.add_subcommand("paper-examples", "Recompute and check worked Examples 1 and 2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (examples->parsed()) return cmd_worked_examples();
    if (flaw->parsed()) return cmd_flaw(att);
    if (locate->parsed()) return cmd_recovery("locate", att, true);
    if (unmask->parsed()) return cmd_unmask(att);
    if (pipeline->parsed()) return cmd_recovery("pipeline", att, false);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const AttackError& e) {
    std::cerr << "attack failed at stage " << e.what() << "\n";
    return kAttack;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
