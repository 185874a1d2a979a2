#include "lbscrypt/transcript.hpp"

#include "lbscrypt/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace lbscrypt::protocol {

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(what + ": malformed JSON (" + e.what() + ")");
  }
}

// --- field readers ---------------------------------------------------------

BigInt as_bigint(const Json& j, const std::string& field) {
  if (j.is_number_unsigned()) return BigInt(std::to_string(j.get<std::uint64_t>()));
  if (j.is_number_integer()) return BigInt(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) {
    try {
      return numkit::parse_bigint(j.get<std::string>());
    } catch (const std::exception&) {
      throw ValidationError(field + ": not an integer");
    }
  }
  throw ValidationError(field + ": expected an integer");
}

std::uint64_t as_u64(const Json& j, const std::string& field) {
  BigInt v = as_bigint(j, field);
  if (v < 0) throw ValidationError(field + ": must be non-negative");
  try {
    return numkit::to_u64(v);
  } catch (const std::exception&) {
    throw ValidationError(field + ": does not fit in 64 bits");
  }
}

unsigned as_unsigned(const Json& j, const std::string& field) {
  std::uint64_t v = as_u64(j, field);
  if (v > 0xffffffffULL) throw ValidationError(field + ": too large");
  return static_cast<unsigned>(v);
}

bool as_bool(const Json& j, const std::string& field) {
  if (!j.is_boolean()) throw ValidationError(field + ": expected true or false");
  return j.get<bool>();
}

std::string as_string(const Json& j, const std::string& field) {
  if (!j.is_string()) throw ValidationError(field + ": expected a string");
  return j.get<std::string>();
}

GridPoint as_point(const Json& j, const std::string& field) {
  if (j.is_array() && j.size() == 2) return {as_bigint(j[0], field), as_bigint(j[1], field)};
  if (j.is_object() && j.size() == 2 && j.contains("x") && j.contains("y")) {
    return {as_bigint(j["x"], field), as_bigint(j["y"], field)};
  }
  throw ValidationError(field + ": expected [x, y]");
}

std::vector<GridPoint> as_points(const Json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError(field + ": expected a list of [x, y]");
  std::vector<GridPoint> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_point(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<BigInt> as_bigints(const Json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError(field + ": expected a list");
  std::vector<BigInt> out;
  for (const auto& v : j) out.push_back(as_bigint(v, field));
  return out;
}

std::vector<std::size_t> as_indices(const Json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError(field + ": expected a list");
  std::vector<std::size_t> out;
  for (const auto& v : j) out.push_back(static_cast<std::size_t>(as_u64(v, field)));
  return out;
}

const Json& need(const Json& obj, const char* key, const std::string& ctx) {
  if (!obj.is_object() || !obj.contains(key)) throw ValidationError(ctx + "." + key + ": missing");
  return obj.at(key);
}

// --- writers ---------------------------------------------------------------

Json big(const BigInt& v) { return numkit::to_dec(v); }

Json point(const GridPoint& p) { return Json::array({big(p.x), big(p.y)}); }

Json points(const std::vector<GridPoint>& ps) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(point(p));
  return out;
}

Json bigs(const std::vector<BigInt>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(big(v));
  return out;
}

Json indices(const std::vector<std::size_t>& vs) {
  Json out = Json::array();
  for (auto v : vs) out.push_back(v);
  return out;
}

Entity entity_from_string(const std::string& s) {
  for (Entity e : {Entity::user, Entity::edge_node, Entity::lbs, Entity::ca}) {
    if (s == to_string(e)) return e;
  }
  throw ValidationError("entity: unknown '" + s + "'");
}

she::SecurityLevel level_from_string(const std::string& s) {
  if (s == "toy") return she::SecurityLevel::toy;
  if (s == "small") return she::SecurityLevel::small;
  throw ValidationError("she_level: expected toy|small, got '" + s + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

ScenarioConfig scenario_from_json(const std::string& text) {
  Json j = parse(text, "scenario");
  if (!j.is_object()) throw ValidationError("scenario: expected a JSON object");
  static const std::set<std::string> known = {
      "user_location", "history",     "pois",        "t",           "k_sec",      "world_diameter",
      "k_nn",          "seed",        "mode",        "mask_range",  "signed_mask", "random_history",
      "leak_z",        "she_backend", "she_level",   "dgk_backend", "dgk_bits",   "query_text"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ValidationError(key + ": unknown field");
  }
  ScenarioConfig cfg;
  cfg.user_location = as_point(need(j, "user_location", "scenario"), "user_location");
  cfg.pois = as_points(need(j, "pois", "scenario"), "pois");
  cfg.world_diameter = as_bigint(need(j, "world_diameter", "scenario"), "world_diameter");
  if (j.contains("history")) cfg.history = as_points(j["history"], "history");
  if (j.contains("t")) cfg.t = as_unsigned(j["t"], "t");
  if (j.contains("k_sec")) cfg.k_sec = as_unsigned(j["k_sec"], "k_sec");
  if (j.contains("k_nn")) cfg.k_nn = as_unsigned(j["k_nn"], "k_nn");
  if (j.contains("seed")) cfg.seed = as_u64(j["seed"], "seed");
  if (j.contains("mode")) cfg.mode = mode_from_string(as_string(j["mode"], "mode"));
  if (j.contains("mask_range")) cfg.mask_range = as_bigint(j["mask_range"], "mask_range");
  if (j.contains("signed_mask")) cfg.signed_mask = as_bool(j["signed_mask"], "signed_mask");
  if (j.contains("random_history")) cfg.random_history = as_bool(j["random_history"], "random_history");
  if (j.contains("leak_z")) cfg.leak_z = as_bool(j["leak_z"], "leak_z");
  try {
    if (j.contains("she_backend")) cfg.she_backend = she::backend_from_string(as_string(j["she_backend"], "she_backend"));
    if (j.contains("dgk_backend")) cfg.dgk_backend = dgk::backend_from_string(as_string(j["dgk_backend"], "dgk_backend"));
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("backend: ") + e.what());
  }
  if (j.contains("she_level")) cfg.she_level = level_from_string(as_string(j["she_level"], "she_level"));
  if (j.contains("dgk_bits")) cfg.dgk_bits = as_unsigned(j["dgk_bits"], "dgk_bits");
  if (j.contains("query_text")) cfg.query_text = as_string(j["query_text"], "query_text");
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) { return scenario_from_json(read_file(path)); }

std::string scenario_to_json(const ScenarioConfig& cfg) {
  Json j;
  j["user_location"] = point(cfg.user_location);
  j["history"] = points(cfg.history);
  j["pois"] = points(cfg.pois);
  j["t"] = cfg.t;
  j["k_sec"] = cfg.k_sec;
  j["world_diameter"] = big(cfg.world_diameter);
  j["k_nn"] = cfg.k_nn;
  j["seed"] = cfg.seed;
  j["mode"] = to_string(cfg.mode);
  j["mask_range"] = big(cfg.mask_range);
  j["signed_mask"] = cfg.signed_mask;
  j["random_history"] = cfg.random_history;
  j["leak_z"] = cfg.leak_z;
  j["she_backend"] = she::to_string(cfg.she_backend);
  j["she_level"] = she::to_string(cfg.she_level);
  j["dgk_backend"] = dgk::to_string(cfg.dgk_backend);
  j["dgk_bits"] = cfg.dgk_bits;
  j["query_text"] = cfg.query_text;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Transcript
// ---------------------------------------------------------------------------

Json manifest_to_json(const RunManifest& manifest) {
  Json man;
  man["command"] = manifest.command;
  man["config_path"] = manifest.config_path;
  man["seed"] = manifest.seed;
  man["mode"] = manifest.mode;
  man["output_path"] = manifest.output_path;
  man["tool_version"] = manifest.tool_version;
  if (manifest.duration_seconds) man["duration_seconds"] = *manifest.duration_seconds;
  return man;
}

std::string transcript_to_json(const QueryTranscript& tr, const RunManifest& manifest) {
  Json j;
  j["format"] = kTranscriptFormat;

  j["manifest"] = manifest_to_json(manifest);

  const PublicView& v = tr.view;
  Json view;
  view["mode"] = to_string(v.mode);
  view["t"] = v.t;
  view["l"] = v.l;
  view["k_sec"] = v.k_sec;
  view["k_nn"] = v.k_nn;
  view["m"] = big(v.m);
  view["mask_range"] = big(v.mask_range);
  view["signed_mask"] = v.signed_mask;
  view["leak_z"] = v.leak_z;
  view["random_history"] = v.random_history;
  view["pois"] = points(v.pois);
  view["known_history"] = points(v.known_history);
  view["she_plain_modulus"] = big(v.she_plain_modulus);
  view["dgk_u"] = big(v.dgk_u);
  view["key_fingerprint"] = v.key_fingerprint;
  j["view"] = view;

  Json msgs = Json::array();
  for (const auto& m : tr.messages) {
    msgs.push_back({{"seq", m.seq}, {"from", to_string(m.from)}, {"to", to_string(m.to)}, {"kind", m.kind}, {"body", m.body}});
  }
  j["messages"] = msgs;

  Json comps = Json::array();
  for (const auto& c : tr.comparisons) {
    Json cj;
    cj["a"] = c.a;
    cj["b"] = c.b;
    cj["d_a"] = big(c.d_a);
    cj["d_b"] = big(c.d_b);
    cj["truth"] = c.truth;
    cj["z"] = big(c.z);
    cj["rho"] = big(c.rho);
    cj["rhobar"] = big(c.rhobar);
    cj["epsilon"] = c.epsilon;
    cj["xi"] = bigs(c.xi);
    cj["mask"] = big(c.mask);
    cj["w"] = big(c.w);
    cj["wbar"] = big(c.wbar);
    cj["lbs_z"] = c.lbs_z ? big(*c.lbs_z) : Json(nullptr);
    cj["c_plain"] = bigs(c.c_plain);
    cj["decision"] = c.decision;
    comps.push_back(cj);
  }
  j["comparisons"] = comps;

  j["response"] = {{"indices", indices(tr.response.indices)},
                   {"points", points(tr.response.points)},
                   {"sealed", {{"body", tr.response.sealed.body_hex}, {"tag", tr.response.sealed.tag}}}};
  j["delivered"] = indices(tr.delivered);

  const GroundTruth& s = tr.sidecar;
  j["sidecar"] = {{"user_location", point(s.user_location)},
                  {"history", points(s.history)},
                  {"tx", big(s.tx)},
                  {"ty", big(s.ty)},
                  {"distances", bigs(s.distances)},
                  {"brute_force_order", indices(s.brute_force_order)}};
  return j.dump(2) + "\n";
}

QueryTranscript transcript_from_json(const std::string& text, RunManifest* manifest) {
  Json j = parse(text, "transcript");
  if (!j.is_object() || !j.contains("format") || j["format"] != kTranscriptFormat) {
    throw ValidationError(std::string("format: expected '") + kTranscriptFormat + "'");
  }
  QueryTranscript tr;

  if (manifest) {
    const Json& man = need(j, "manifest", "transcript");
    manifest->command = as_string(need(man, "command", "manifest"), "manifest.command");
    manifest->config_path = as_string(need(man, "config_path", "manifest"), "manifest.config_path");
    manifest->seed = as_u64(need(man, "seed", "manifest"), "manifest.seed");
    manifest->mode = as_string(need(man, "mode", "manifest"), "manifest.mode");
    manifest->output_path = as_string(need(man, "output_path", "manifest"), "manifest.output_path");
    manifest->tool_version = as_string(need(man, "tool_version", "manifest"), "manifest.tool_version");
    if (man.contains("duration_seconds")) manifest->duration_seconds = man["duration_seconds"].get<double>();
  }

  const Json& view = need(j, "view", "transcript");
  PublicView& v = tr.view;
  v.mode = mode_from_string(as_string(need(view, "mode", "view"), "view.mode"));
  v.t = as_unsigned(need(view, "t", "view"), "view.t");
  v.l = as_unsigned(need(view, "l", "view"), "view.l");
  v.k_sec = as_unsigned(need(view, "k_sec", "view"), "view.k_sec");
  v.k_nn = as_unsigned(need(view, "k_nn", "view"), "view.k_nn");
  v.m = as_bigint(need(view, "m", "view"), "view.m");
  v.mask_range = as_bigint(need(view, "mask_range", "view"), "view.mask_range");
  v.signed_mask = as_bool(need(view, "signed_mask", "view"), "view.signed_mask");
  v.leak_z = as_bool(need(view, "leak_z", "view"), "view.leak_z");
  v.random_history = as_bool(need(view, "random_history", "view"), "view.random_history");
  v.pois = as_points(need(view, "pois", "view"), "view.pois");
  v.known_history = as_points(need(view, "known_history", "view"), "view.known_history");
  v.she_plain_modulus = as_bigint(need(view, "she_plain_modulus", "view"), "view.she_plain_modulus");
  v.dgk_u = as_bigint(need(view, "dgk_u", "view"), "view.dgk_u");
  v.key_fingerprint = as_string(need(view, "key_fingerprint", "view"), "view.key_fingerprint");

  for (const auto& mj : need(j, "messages", "transcript")) {
    Message m;
    m.seq = static_cast<std::size_t>(as_u64(need(mj, "seq", "message"), "message.seq"));
    m.from = entity_from_string(as_string(need(mj, "from", "message"), "message.from"));
    m.to = entity_from_string(as_string(need(mj, "to", "message"), "message.to"));
    m.kind = as_string(need(mj, "kind", "message"), "message.kind");
    m.body = need(mj, "body", "message");
    tr.messages.push_back(std::move(m));
  }

  for (const auto& cj : need(j, "comparisons", "transcript")) {
    ComparisonTranscript c;
    const std::string ctx = "comparison";
    c.a = static_cast<std::size_t>(as_u64(need(cj, "a", ctx), ctx + ".a"));
    c.b = static_cast<std::size_t>(as_u64(need(cj, "b", ctx), ctx + ".b"));
    c.d_a = as_bigint(need(cj, "d_a", ctx), ctx + ".d_a");
    c.d_b = as_bigint(need(cj, "d_b", ctx), ctx + ".d_b");
    c.truth = as_bool(need(cj, "truth", ctx), ctx + ".truth");
    c.z = as_bigint(need(cj, "z", ctx), ctx + ".z");
    c.rho = as_bigint(need(cj, "rho", ctx), ctx + ".rho");
    c.rhobar = as_bigint(need(cj, "rhobar", ctx), ctx + ".rhobar");
    c.epsilon = need(cj, "epsilon", ctx).get<int>();
    c.xi = as_bigints(need(cj, "xi", ctx), ctx + ".xi");
    c.mask = as_bigint(need(cj, "mask", ctx), ctx + ".mask");
    c.w = as_bigint(need(cj, "w", ctx), ctx + ".w");
    c.wbar = as_bigint(need(cj, "wbar", ctx), ctx + ".wbar");
    const Json& lz = need(cj, "lbs_z", ctx);
    if (!lz.is_null()) c.lbs_z = as_bigint(lz, ctx + ".lbs_z");
    c.c_plain = as_bigints(need(cj, "c_plain", ctx), ctx + ".c_plain");
    c.decision = as_bool(need(cj, "decision", ctx), ctx + ".decision");
    tr.comparisons.push_back(std::move(c));
  }

  const Json& resp = need(j, "response", "transcript");
  tr.response.indices = as_indices(need(resp, "indices", "response"), "response.indices");
  tr.response.points = as_points(need(resp, "points", "response"), "response.points");
  const Json& sealed = need(resp, "sealed", "response");
  tr.response.sealed.body_hex = as_string(need(sealed, "body", "response.sealed"), "response.sealed.body");
  tr.response.sealed.tag = as_string(need(sealed, "tag", "response.sealed"), "response.sealed.tag");
  tr.delivered = as_indices(need(j, "delivered", "transcript"), "delivered");

  const Json& s = need(j, "sidecar", "transcript");
  tr.sidecar.user_location = as_point(need(s, "user_location", "sidecar"), "sidecar.user_location");
  tr.sidecar.history = as_points(need(s, "history", "sidecar"), "sidecar.history");
  tr.sidecar.tx = as_bigint(need(s, "tx", "sidecar"), "sidecar.tx");
  tr.sidecar.ty = as_bigint(need(s, "ty", "sidecar"), "sidecar.ty");
  tr.sidecar.distances = as_bigints(need(s, "distances", "sidecar"), "sidecar.distances");
  tr.sidecar.brute_force_order = as_indices(need(s, "brute_force_order", "sidecar"), "sidecar.brute_force_order");
  return tr;
}

QueryTranscript load_transcript(const std::string& path, RunManifest* manifest) {
  return transcript_from_json(read_file(path), manifest);
}

}  // namespace lbscrypt::protocol
