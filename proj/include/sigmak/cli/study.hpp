#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "sigmak/cli/manifest.hpp"
#include "sigmak/cli/runner.hpp"

namespace sigmak::cli {

struct StudyRow {
  std::string scenario;
  int resolution = 0;
  double h = 0.0;
  double error = 0.0;
  std::string order;  // empty on the first resolution, "exact" at rounding level, else log2 ratio
  std::string status;
  bool failed = false;
  std::string message;
};

struct StudyTable {
  std::vector<StudyRow> rows;
  bool any_failed() const;
  /// Numeric orders of one scenario, skipping "exact" and the first row.
  std::vector<double> orders(const std::string& scenario) const;
};

/// Errors count as rounding level below 1024 eps times the scenario's error scale.
bool at_rounding_level(double error, double scale);

/// Runs every scenario of the manifest at each resolution. Needs at least two resolutions
/// (argument error) and only scenarios with an error metric (validation error naming the scenario).
StudyTable convergence_study(const ExperimentManifest& manifest, const std::vector<int>& resolutions,
                             const RunOptions& opts = {});

/// Writes study.csv, schema.json and study_record.json into the resolved output directory.
StudyTable run_study(const ExperimentManifest& manifest, const std::vector<int>& resolutions, const RunOptions& opts = {});

void write_study_csv(std::ostream& os, const StudyTable& table);

}  // namespace sigmak::cli
