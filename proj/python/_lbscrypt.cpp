#include "lbscrypt/attacks.hpp"
#include "lbscrypt/errors.hpp"
#include "lbscrypt/protocol.hpp"
#include "lbscrypt/transcript.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace lbscrypt;

namespace {

py::int_ to_py(const BigInt& v) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(numkit::to_dec(v).c_str(), nullptr, 10));
}

BigInt from_py(const py::int_& v) { return numkit::parse_bigint(py::str(py::handle(v)).cast<std::string>()); }

std::string simulate(const std::string& scenario_json, std::optional<std::string> mode, std::optional<std::uint64_t> seed) {
  protocol::ScenarioConfig cfg = protocol::scenario_from_json(scenario_json);
  if (seed) cfg.seed = *seed;
  if (mode) cfg.mode = protocol::mode_from_string(*mode);
  protocol::QueryTranscript tr = protocol::run_full_query(cfg);
  protocol::RunManifest man;
  man.command = "simulate";
  man.seed = cfg.seed;
  man.mode = protocol::to_string(cfg.mode);
  return protocol::transcript_to_json(tr, man);
}

std::string attack_pipeline(const std::string& transcript_json, std::uint64_t node_budget, bool require_z_leak) {
  protocol::QueryTranscript tr = protocol::transcript_from_json(transcript_json);
  attacks::PipelineOptions opts;
  opts.node_budget = node_budget;
  opts.require_z_leak = require_z_leak;
  attacks::RecoveryReport r = attacks::full_attack_pipeline(tr, opts);
  protocol::RunManifest man;
  man.command = require_z_leak ? "attack locate" : "attack pipeline";
  man.mode = protocol::to_string(tr.view.mode);
  return attacks::recovery_report_to_json(r, protocol::manifest_to_json(man));
}

std::string attack_flaw(unsigned l, unsigned k_sec, std::uint64_t trials, std::uint64_t seed, const std::string& dgk,
                        unsigned workers) {
  attacks::FlawConfig cfg;
  cfg.l = l;
  cfg.k_sec = k_sec;
  cfg.dgk_backend = dgk::backend_from_string(dgk);
  cfg.workers = workers;
  numkit::SeededRng rng(seed);
  attacks::FlawReport r = attacks::demonstrate_flaw(cfg, trials, rng);
  protocol::RunManifest man;
  man.command = "attack flaw";
  man.seed = seed;
  man.mode = "faithful";
  return attacks::flaw_report_to_json(r, protocol::manifest_to_json(man));
}

std::vector<py::int_> unmask(const py::int_& z, const py::int_& m, bool signed_mask) {
  std::vector<py::int_> out;
  for (const auto& c : attacks::unmask_difference(from_py(z), from_py(m), signed_mask)) out.push_back(to_py(c));
  return out;
}

py::dict msb_collision(unsigned l, const py::int_& rho, const py::int_& z0) {
  attacks::MsbCollision c = attacks::build_msb_collision(l, from_py(rho), from_py(z0));
  py::dict d;
  d["z0"] = to_py(c.z0);
  d["z1"] = to_py(c.z1);
  d["w0"] = to_py(c.w0);
  d["w1"] = to_py(c.w1);
  d["wbar"] = to_py(c.wbar);
  d["rhobar"] = to_py(c.rhobar);
  return d;
}

bool worked_examples() { return attacks::run_worked_examples().all_ok; }

}  // namespace

PYBIND11_MODULE(_lbscrypt, m) {
  m.doc() = "Private k-NN protocol simulator and attacks";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<AttackError>(m, "AttackError", PyExc_RuntimeError);
  py::register_exception<CryptoError>(m, "CryptoError", PyExc_RuntimeError);

  m.def("simulate", &simulate, py::arg("scenario_json"), py::arg("mode") = py::none(), py::arg("seed") = py::none(),
        "Run one query end to end; returns the transcript JSON");
  m.def("attack_pipeline", &attack_pipeline, py::arg("transcript_json"),
        py::arg("node_budget") = attacks::kDefaultNodeBudget, py::arg("require_z_leak") = false,
        "Recover the user location from a transcript; returns the report JSON");
  m.def("attack_flaw", &attack_flaw, py::arg("l") = 20, py::arg("k_sec") = 40, py::arg("trials") = 10000,
        py::arg("seed") = 1, py::arg("dgk") = "transparent", py::arg("workers") = 1,
        "Measure decision agreement of the bitwise comparison; returns the report JSON");
  m.def("unmask", &unmask, py::arg("z"), py::arg("m"), py::arg("signed_mask") = false,
        "Candidate differences for a masked z");
  m.def("msb_collision", &msb_collision, py::arg("l"), py::arg("rho"), py::arg("z0") = 0,
        "Two z values with opposite MSB and identical reduced w");
  m.def("worked_examples", &worked_examples, "True iff the worked examples reproduce");
  m.attr("__version__") = protocol::kToolVersion;
}
