#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigmak/geometry/grid.hpp"

namespace sigmak::cli {

/// Scenario ids understood by the runner.
const std::vector<std::string>& known_scenarios();
/// Scenario ids that produce an error metric usable by `study`.
bool supports_study(const std::string& id);
/// Whether a scenario needs the manifest "problem" block.
bool needs_problem(const std::string& id);

struct ScenarioSpec {
  std::string id;
  std::string name;  // unique within the manifest, used as the output file stem
  nlohmann::json params = nlohmann::json::object();
};

struct ExperimentManifest {
  nlohmann::json chart;
  nlohmann::json metric;    // {"model": ..., "params": {...}}
  nlohmann::json problem;   // null when absent
  nlohmann::json solver = nlohmann::json::object();
  std::vector<ScenarioSpec> scenarios;
  std::string output_dir = "sigmak_out";
  std::uint64_t seed = 0;
  nlohmann::json raw;
  std::string hash;  // FNV-1a 64 of the canonical dump of `raw`, hex
};

/// Parses and validates. Every error is a validation error whose message names the field
/// (e.g. "scenarios[2].id: unknown scenario 'foo'"); an io error when the file cannot be read.
ExperimentManifest load_manifest(const std::string& path);
ExperimentManifest parse_manifest(const nlohmann::json& j);

/// The manifest chart with its resolution replaced.
geometry::ChartGrid chart_at(const ExperimentManifest& m, int resolution);
geometry::ChartGrid chart_of(const ExperimentManifest& m);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace sigmak::cli
