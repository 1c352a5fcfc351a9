#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "sigmak/cli/runner.hpp"
#include "sigmak/cli/study.hpp"
#include "sigmak/common/errors.hpp"

namespace {

std::vector<int> parse_resolutions(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      sigmak::fail(sigmak::ErrorKind::argument, "--res: '" + item + "' is not an integer");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sigmak: fully nonlinear conformal equations on charts"};
  app.require_subcommand(1);

  std::string manifest_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool parallel = false;
  std::string res = "17,33,65";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("manifest", manifest_path, "experiment manifest (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory (overrides $SIGMAK_OUTPUT_DIR and the manifest)");
    sub->add_option("--seed", seed, "seed for randomized scenarios (overrides the manifest)");
    sub->add_flag("--parallel", parallel, "run scenarios concurrently");
  };
  auto* run_cmd = app.add_subcommand("run", "execute every scenario of a manifest");
  add_common(run_cmd);
  auto* study_cmd = app.add_subcommand("study", "convergence study over resolutions");
  add_common(study_cmd);
  study_cmd->add_option("--res", res, "comma separated resolutions, e.g. 17,33,65");

  CLI11_PARSE(app, argc, argv);

  sigmak::cli::RunOptions opts;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  if (run_cmd->count("--seed") > 0 || study_cmd->count("--seed") > 0) opts.seed = seed;
  opts.parallel = parallel;

  try {
    const auto manifest = sigmak::cli::load_manifest(manifest_path);
    if (*run_cmd) {
      const auto rec = sigmak::cli::run(manifest, opts);
      for (const auto& s : rec.scenarios) {
        std::cout << s.name << " [" << s.id << "] " << s.status;
        if (!s.message.empty()) std::cout << ": " << s.message;
        std::cout << '\n';
      }
      std::cout << "outputs in " << rec.output_dir << " (manifest " << rec.manifest_hash << ")\n";
      return rec.any_failed() ? 1 : 0;
    }
    const auto table = sigmak::cli::run_study(manifest, parse_resolutions(res), opts);
    sigmak::cli::write_study_csv(std::cout, table);
    return table.any_failed() ? 1 : 0;
  } catch (const sigmak::Error& e) {
    std::cerr << "sigmak: " << e.what() << '\n';
    return 2;
  }
}
