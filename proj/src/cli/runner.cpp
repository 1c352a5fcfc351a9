#include "sigmak/cli/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>

#include "sigmak/cli/scenarios.hpp"
#include "sigmak/common/errors.hpp"
#include "sigmak/common/parallel.hpp"

namespace sigmak::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::io, "cannot write '" + path.string() + "'");
  out << contents;
  require(static_cast<bool>(out), ErrorKind::io, "write to '" + path.string() + "' failed");
}

ScenarioRecord execute(const ScenarioSpec& s, const ScenarioContext& ctx, const fs::path& dir) {
  ScenarioRecord rec;
  rec.name = s.name;
  rec.id = s.id;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto out = run_scenario(s, ctx);
    rec.status = out.status;
    rec.failed = out.failed;
    rec.message = out.message;
    rec.summary = std::move(out.summary);
    for (const auto& f : out.files) {
      const std::string file = s.name + "_" + f.suffix;
      write_file(dir / file, f.contents);
      rec.outputs.push_back(file);
      rec.output_kinds.push_back(f.kind);
    }
  } catch (const Error& e) {
    rec.status = "failed";
    rec.failed = true;
    rec.message = e.what();
  } catch (const std::exception& e) {
    rec.status = "failed";
    rec.failed = true;
    rec.message = e.what();
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace

bool RunRecord::any_failed() const {
  for (const auto& s : scenarios)
    if (s.failed) return true;
  return false;
}

const ScenarioRecord* RunRecord::find(const std::string& name) const {
  for (const auto& s : scenarios)
    if (s.name == name) return &s;
  return nullptr;
}

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json j;
  j["manifest_hash"] = r.manifest_hash;
  j["seed"] = r.seed;
  j["output_dir"] = r.output_dir;
  j["wall_seconds"] = r.wall_seconds;
  j["failed"] = r.any_failed();
  j["scenarios"] = nlohmann::json::array();
  for (const auto& s : r.scenarios)
    j["scenarios"].push_back({{"name", s.name},
                              {"id", s.id},
                              {"status", s.status},
                              {"failed", s.failed},
                              {"message", s.message},
                              {"outputs", s.outputs},
                              {"wall_seconds", s.wall_seconds},
                              {"summary", s.summary}});
  return j;
}

std::string resolve_output_dir(const ExperimentManifest& m, const RunOptions& opts) {
  if (opts.out_dir) return *opts.out_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return m.output_dir;
}

RunRecord run(const ExperimentManifest& manifest, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord record;
  record.manifest_hash = manifest.hash;
  record.seed = opts.seed.value_or(manifest.seed);
  record.output_dir = resolve_output_dir(manifest, opts);
  const fs::path dir(record.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, ErrorKind::io, "cannot create output directory '" + record.output_dir + "': " + ec.message());

  ScenarioContext ctx{&manifest, chart_of(manifest), record.seed};
  if (opts.parallel && manifest.scenarios.size() > 1) {
    // Grid kernels go serial so concurrent scenarios do not oversubscribe the cores.
    const Exec saved = default_exec();
    set_default_exec(Exec::serial);
    std::vector<std::future<ScenarioRecord>> jobs;
    for (const auto& s : manifest.scenarios)
      jobs.push_back(std::async(std::launch::async, [&, s] { return execute(s, ctx, dir); }));
    for (auto& j : jobs) record.scenarios.push_back(j.get());
    set_default_exec(saved);
  } else {
    for (const auto& s : manifest.scenarios) record.scenarios.push_back(execute(s, ctx, dir));
  }

  nlohmann::json schema;
  schema["kinds"] = csv_schema();
  schema["files"] = nlohmann::json::object();
  record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& rec : record.scenarios)
    for (std::size_t i = 0; i < rec.outputs.size(); ++i) schema["files"][rec.outputs[i]] = rec.output_kinds[i];
  write_file(dir / "schema.json", schema.dump(2) + "\n");
  write_file(dir / "run_record.json", to_json(record).dump(2) + "\n");
  return record;
}

RunRecord run(const std::string& manifest_path, const RunOptions& opts) { return run(load_manifest(manifest_path), opts); }

}  // namespace sigmak::cli
