#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigmak/cli/manifest.hpp"

namespace sigmak::cli {

/// Name of the environment variable that overrides the manifest output_dir.
inline constexpr const char* kOutputDirEnv = "SIGMAK_OUTPUT_DIR";

struct RunOptions {
  std::optional<std::string> out_dir;  // --out; wins over the environment and the manifest
  std::optional<std::uint64_t> seed;   // --seed; wins over the manifest
  bool parallel = false;               // run scenarios concurrently
};

struct ScenarioRecord {
  std::string name;
  std::string id;
  std::string status;
  bool failed = false;
  std::string message;
  std::vector<std::string> outputs;
  std::vector<std::string> output_kinds;  // csv schema kind per output file
  double wall_seconds = 0.0;
  nlohmann::json summary;
};

struct RunRecord {
  std::string manifest_hash;
  std::uint64_t seed = 0;
  std::string output_dir;
  std::vector<ScenarioRecord> scenarios;
  double wall_seconds = 0.0;

  bool any_failed() const;
  const ScenarioRecord* find(const std::string& name) const;
};

nlohmann::json to_json(const RunRecord& record);

/// Output directory after applying --out, then the environment variable, then the manifest.
std::string resolve_output_dir(const ExperimentManifest& m, const RunOptions& opts);

/// Executes every scenario, writes <name>_<suffix> files, schema.json and run_record.json.
/// A failing scenario is recorded and never prevents the others from running or writing.
RunRecord run(const ExperimentManifest& manifest, const RunOptions& opts = {});
RunRecord run(const std::string& manifest_path, const RunOptions& opts = {});

}  // namespace sigmak::cli
