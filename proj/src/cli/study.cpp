#include "sigmak/cli/study.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "sigmak/cli/scenarios.hpp"
#include "sigmak/common/errors.hpp"
#include "sigmak/geometry/field_io.hpp"

namespace sigmak::cli {

namespace fs = std::filesystem;

bool StudyTable::any_failed() const {
  for (const auto& r : rows)
    if (r.failed) return true;
  return false;
}

std::vector<double> StudyTable::orders(const std::string& scenario) const {
  std::vector<double> out;
  for (const auto& r : rows)
    if (r.scenario == scenario && !r.order.empty() && r.order != "exact") out.push_back(std::stod(r.order));
  return out;
}

bool at_rounding_level(double error, double scale) {
  return std::abs(error) <= 1024.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
}

StudyTable convergence_study(const ExperimentManifest& m, const std::vector<int>& resolutions, const RunOptions& opts) {
  require(resolutions.size() >= 2, ErrorKind::argument, "a convergence study needs at least two resolutions");
  for (int r : resolutions) require(r >= 3, ErrorKind::argument, "resolution " + std::to_string(r) + " is too small");
  for (const auto& s : m.scenarios)
    require(supports_study(s.id), ErrorKind::validation,
            "scenario '" + s.name + "' (" + s.id + ") has no error metric for a study");

  const std::uint64_t seed = opts.seed.value_or(m.seed);
  StudyTable table;
  for (const auto& s : m.scenarios) {
    double prev = std::numeric_limits<double>::quiet_NaN(), prev_scale = 1.0;
    bool have_prev = false;
    for (int res : resolutions) {
      StudyRow row;
      row.scenario = s.name;
      row.resolution = res;
      double scale = 1.0;
      try {
        ScenarioContext ctx{&m, chart_at(m, res), seed};
        row.h = ctx.chart.h();
        const auto out = run_scenario(s, ctx);
        row.status = out.status;
        row.failed = out.failed;
        row.message = out.message;
        row.error = out.error_metric.value_or(std::numeric_limits<double>::quiet_NaN());
        scale = out.error_scale;
      } catch (const Error& e) {
        row.status = "failed";
        row.failed = true;
        row.message = e.what();
        row.error = std::numeric_limits<double>::quiet_NaN();
      }
      if (have_prev && std::isfinite(prev) && std::isfinite(row.error)) {
        if (at_rounding_level(row.error, scale) && at_rounding_level(prev, prev_scale))
          row.order = "exact";
        else
          row.order = geometry::format_double(std::log2(prev / row.error));
      }
      prev = row.error;
      prev_scale = scale;
      have_prev = true;
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

void write_study_csv(std::ostream& os, const StudyTable& table) {
  os << "scenario,resolution,h,error,order,status\n";
  for (const auto& r : table.rows)
    os << r.scenario << ',' << r.resolution << ',' << geometry::format_double(r.h) << ','
       << geometry::format_double(r.error) << ',' << r.order << ',' << r.status << '\n';
}

StudyTable run_study(const ExperimentManifest& m, const std::vector<int>& resolutions, const RunOptions& opts) {
  auto table = convergence_study(m, resolutions, opts);
  const fs::path dir(resolve_output_dir(m, opts));
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, ErrorKind::io, "cannot create output directory '" + dir.string() + "': " + ec.message());

  auto write = [&](const std::string& name, const std::string& contents) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::io, "cannot write '" + (dir / name).string() + "'");
    out << contents;
  };
  std::ostringstream csv;
  write_study_csv(csv, table);
  write("study.csv", csv.str());
  nlohmann::json schema;
  schema["kinds"] = {{"study", csv_schema()["study"]}};
  schema["files"] = {{"study.csv", "study"}};
  write("schema.json", schema.dump(2) + "\n");
  nlohmann::json rec;
  rec["manifest_hash"] = m.hash;
  rec["seed"] = opts.seed.value_or(m.seed);
  rec["resolutions"] = resolutions;
  rec["failed"] = table.any_failed();
  for (const auto& r : table.rows)
    rec["rows"].push_back({{"scenario", r.scenario}, {"resolution", r.resolution}, {"error", r.error},
                           {"order", r.order}, {"status", r.status}, {"message", r.message}});
  write("study_record.json", rec.dump(2) + "\n");
  return table;
}

}  // namespace sigmak::cli
