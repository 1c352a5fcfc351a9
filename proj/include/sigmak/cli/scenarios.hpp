#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigmak/cli/manifest.hpp"
#include "sigmak/equation/problem.hpp"
#include "sigmak/geometry/fields.hpp"

namespace sigmak::cli {

struct OutputFile {
  std::string suffix;  // written as <scenario name>_<suffix>
  std::string kind;    // key into csv_schema() for CSV files
  std::string contents;
};

struct ScenarioOutput {
  std::string status = "ok";
  bool failed = false;
  std::string message;
  std::vector<OutputFile> files;
  nlohmann::json summary = nlohmann::json::object();
  std::optional<double> error_metric;  // set by scenarios that support `study`
  double error_scale = 1.0;
};

struct ScenarioContext {
  const ExperimentManifest* manifest = nullptr;
  geometry::ChartGrid chart;
  std::uint64_t seed = 0;
};

/// Throws on failure; the runner records the error against the scenario.
ScenarioOutput run_scenario(const ScenarioSpec& scenario, const ScenarioContext& ctx);

/// Column documentation keyed by CSV kind.
nlohmann::json csv_schema();

/// Profiles: {"kind": "zero"}, {"kind": "trig", "amplitude", "factors": [["sin", m], ["cos", m], ...]}
/// (u = A prod_a f_a(m_a x_a), absolute chart coordinates), {"kind": "quadratic", "tangential", "normal"}
/// (u = (alpha |x'|^2 + beta x_n^2) / 2 about the chart centre), {"kind": "random_modes", "amplitude", "modes"}
/// (seeded sum of face-compatible cosine modes, max |u| <= amplitude).
geometry::ScalarField make_profile(const nlohmann::json& profile, const geometry::ChartGrid& grid, std::uint64_t seed);

/// problem_from_json with psi "match_state" resolved against `target`.
equation::ProblemSpec build_problem(const nlohmann::json& problem, const geometry::MetricField& g,
                                    const geometry::ScalarField& target);

}  // namespace sigmak::cli
