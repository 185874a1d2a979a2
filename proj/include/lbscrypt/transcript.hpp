#pragma once

#include "lbscrypt/protocol.hpp"

#include <optional>
#include <string>

// Scenario files in, transcript files out. Both are JSON; big integers are
// written as decimal strings and accepted as either numbers or strings.
namespace lbscrypt::protocol {

inline constexpr const char* kTranscriptFormat = "lbscrypt-transcript/1";
inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string mode;
  std::string output_path;
  std::string tool_version = kToolVersion;
  std::optional<double> duration_seconds;  // omitted unless timing is requested
};

nlohmann::ordered_json manifest_to_json(const RunManifest& manifest);

/// Unknown fields are rejected; errors name the field.
ScenarioConfig scenario_from_json(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);
std::string scenario_to_json(const ScenarioConfig& cfg);

std::string transcript_to_json(const QueryTranscript& tr, const RunManifest& manifest);
QueryTranscript transcript_from_json(const std::string& text, RunManifest* manifest = nullptr);
QueryTranscript load_transcript(const std::string& path, RunManifest* manifest = nullptr);

}  // namespace lbscrypt::protocol
