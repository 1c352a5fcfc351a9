#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "sigmak/cli/manifest.hpp"
#include "sigmak/cli/runner.hpp"
#include "sigmak/cli/scenarios.hpp"
#include "sigmak/cli/study.hpp"
#include "support.hpp"

using namespace sigmak;
using namespace sigmak::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("sigmak_test_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json sphere_manifest() {
  return json::parse(R"({
    "chart": {"kind": "sphere_chart", "n": 3, "resolution": 9, "r": 0.5},
    "metric": {"model": "round_sphere"},
    "problem": {"branch": "W", "t": 1.0, "a": 1.0, "b": -0.5, "S": {"kind": "metric_multiple", "c": 0.5},
                "operator": {"k": 2}, "rhs": {"kind": "exp_decay", "k": 1, "psi": "match_zero"}},
    "scenarios": [{"id": "newton", "name": "sphere", "params": {"state": {"perturbation": {"amplitude": 0.01}}}}],
    "seed": 3
  })");
}

std::string validation_message(const json& j) {
  try {
    parse_manifest(j);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
    return e.what();
  }
  FAIL("expected a validation error");
  return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("manifest validation names the offending field") {
  auto j = sphere_manifest();
  CHECK_NOTHROW(parse_manifest(j));

  SUBCASE("unknown scenario id") {
    j["scenarios"].push_back({{"id", "levitate"}});
    const auto msg = validation_message(j);
    CHECK(contains(msg, "scenarios[1].id"));
    CHECK(contains(msg, "levitate"));
  }
  SUBCASE("unknown field") {
    j["scenarios"][0]["params"]["tolerance"] = 1.0;
    CHECK(contains(validation_message(j), "scenarios[0].params.tolerance"));
  }
  SUBCASE("wrong type") {
    j["problem"]["t"] = "one";
    CHECK(contains(validation_message(j), "problem.t"));
  }
  SUBCASE("bad nested value") {
    j["scenarios"][0]["params"]["state"]["profile"] = {{"kind", "spiral"}};
    CHECK(contains(validation_message(j), "scenarios[0].params.state.profile.kind"));
  }
  SUBCASE("missing problem") {
    j.erase("problem");
    CHECK(contains(validation_message(j), "problem"));
  }
  SUBCASE("duplicate names") {
    j["scenarios"].push_back(j["scenarios"][0]);
    CHECK(contains(validation_message(j), "duplicate"));
  }
  SUBCASE("bounds without a structure constant") {
    j["scenarios"].push_back({{"id", "bounds"}, {"name", "b"}, {"params", json::object()}});
    CHECK(contains(validation_message(j), "delta1 or delta3"));
  }
  SUBCASE("chart and solver are checked up front") {
    j["chart"]["kind"] = "klein_bottle";
    CHECK(contains(validation_message(j), "chart"));
    j = sphere_manifest();
    j["solver"] = {{"shrink", 2.0}};
    CHECK(contains(validation_message(j), "solver"));
  }
  SUBCASE("missing file") {
    CHECK(testing::kind_of([] { load_manifest("/nonexistent/manifest.json"); }) == ErrorKind::io);
  }
}

TEST_CASE("manifest hash") {
  const auto a = parse_manifest(sphere_manifest());
  const auto b = parse_manifest(sphere_manifest());
  CHECK(a.hash == b.hash);
  CHECK(a.hash.size() == 16);
  auto j = sphere_manifest();
  j["seed"] = 4;
  CHECK(parse_manifest(j).hash != a.hash);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("profiles") {
  const auto grid = geometry::ChartGrid::periodic_torus(3, 9);
  const auto trig = make_profile(json::parse(R"({"kind": "trig", "amplitude": 0.1, "factors": [["sin", 1], ["cos", 2]]})"),
                                 grid, 0);
  double x[geometry::kMaxDim];
  for (std::size_t p = 0; p < grid.size(); ++p) {
    grid.coords(p, x);
    CHECK(trig[p] == 0.1 * std::sin(x[0]) * std::cos(2.0 * x[1]));
  }
  const auto half = geometry::ChartGrid::half_ball(3, 9, 1.0);
  const auto q = make_profile(json::parse(R"({"kind": "quadratic", "tangential": 0.4, "normal": 0.2})"), half, 0);
  for (std::size_t p = 0; p < half.size(); ++p) {
    half.coords(p, x);
    CHECK(q[p] == doctest::Approx(0.2 * (x[0] * x[0] + x[1] * x[1]) + 0.1 * x[2] * x[2]).epsilon(1e-15));
  }
  const json rm = {{"kind", "random_modes"}, {"amplitude", 0.05}, {"modes", 4}};
  const auto r1 = make_profile(rm, half, 11), r2 = make_profile(rm, half, 11), r3 = make_profile(rm, half, 12);
  CHECK(r1.values == r2.values);
  CHECK(r1.values != r3.values);
  for (double v : r1.values) CHECK(std::abs(v) <= 0.05 + 1e-15);
}

TEST_CASE("output directory precedence") {
  auto m = parse_manifest(sphere_manifest());
  m.output_dir = "from_manifest";
  ::unsetenv(kOutputDirEnv);
  CHECK(resolve_output_dir(m, {}) == "from_manifest");
  ::setenv(kOutputDirEnv, "from_env", 1);
  CHECK(resolve_output_dir(m, {}) == "from_env");
  RunOptions o;
  o.out_dir = "from_flag";
  CHECK(resolve_output_dir(m, o) == "from_flag");
  ::unsetenv(kOutputDirEnv);
}

TEST_CASE("run writes records, schema and deterministic CSVs") {
  const auto m = parse_manifest(sphere_manifest());
  RunOptions o;
  o.out_dir = scratch("run_a").string();
  const auto rec = run(m, o);
  REQUIRE(rec.scenarios.size() == 1);
  CHECK(rec.scenarios[0].status == "converged");
  CHECK_FALSE(rec.any_failed());
  CHECK(rec.manifest_hash == m.hash);
  CHECK(rec.seed == 3);
  const fs::path dir(*o.out_dir);
  for (const auto& f : rec.scenarios[0].outputs) CHECK(fs::exists(dir / f));
  const auto record = json::parse(slurp(dir / "run_record.json"));
  CHECK(record["manifest_hash"] == m.hash);
  CHECK(record["scenarios"][0]["status"] == "converged");
  const auto schema = json::parse(slurp(dir / "schema.json"));
  CHECK(schema["files"]["sphere_log.csv"] == "newton_log");
  CHECK(schema["kinds"]["newton_log"][0]["name"] == "iteration");

  RunOptions o2 = o;
  o2.out_dir = scratch("run_b").string();
  o2.parallel = true;
  run(m, o2);
  for (const auto& f : rec.scenarios[0].outputs) CHECK(slurp(dir / f) == slurp(fs::path(*o2.out_dir) / f));
}

TEST_CASE("a failing scenario does not disturb the others") {
  auto j = sphere_manifest();
  j["scenarios"].push_back({{"id", "bounds"}, {"name", "broken"}, {"params", {{"delta3", 0.1}}}});
  j["problem"]["a"] = 1.5;  // a + n b = 0
  j["scenarios"].push_back({{"id", "cutoff"}, {"name", "cut"}});
  const auto m = parse_manifest(j);
  RunOptions o;
  o.out_dir = scratch("isolation").string();
  const auto rec = run(m, o);
  CHECK(rec.any_failed());
  REQUIRE(rec.find("broken") != nullptr);
  CHECK(rec.find("broken")->failed);
  CHECK(contains(rec.find("broken")->message, "a + n b"));
  CHECK(rec.find("broken")->outputs.empty());
  CHECK_FALSE(rec.find("cut")->failed);

  auto alone = sphere_manifest();
  alone["scenarios"] = json::array({{{"id", "cutoff"}, {"name", "cut"}}});
  RunOptions o2;
  o2.out_dir = scratch("isolation_alone").string();
  run(parse_manifest(alone), o2);
  CHECK(slurp(fs::path(*o.out_dir) / "cut_cutoff.csv") == slurp(fs::path(*o2.out_dir) / "cut_cutoff.csv"));
}

TEST_CASE("convergence study") {
  auto j = json::parse(R"({
    "chart": {"kind": "periodic_torus", "n": 3, "resolution": 9},
    "metric": {"model": "flat"},
    "scenarios": [{"id": "roundtrip", "name": "rt",
                   "params": {"state": {"profile": {"kind": "trig", "amplitude": 0.1, "factors": [["sin", 1], ["cos", 1]]}}}}]
  })");
  const auto m = parse_manifest(j);
  CHECK(testing::kind_of([&] { convergence_study(m, {17}); }) == ErrorKind::argument);
  const auto t = convergence_study(m, {9, 17, 33});
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].order.empty());
  const auto orders = t.orders("rt");
  REQUIRE(orders.size() == 2);
  CHECK(orders[0] > 1.0);
  CHECK(orders[1] > 1.7);
  CHECK(orders[1] < 2.3);
  CHECK(std::stod(t.rows[2].order) == doctest::Approx(std::log2(t.rows[1].error / t.rows[2].error)).epsilon(1e-15));

  j["scenarios"][0]["params"]["state"]["profile"] = {{"kind", "zero"}};
  const auto z = convergence_study(parse_manifest(j), {9, 17});
  CHECK(z.rows[1].order == "exact");

  j["scenarios"][0] = {{"id", "cutoff"}};
  CHECK(testing::kind_of([&] { convergence_study(parse_manifest(j), {9, 17}); }) == ErrorKind::validation);

  std::ostringstream os;
  write_study_csv(os, t);
  CHECK(os.str().rfind("scenario,resolution,h,error,order,status\nrt,9,", 0) == 0);
}

TEST_CASE("command line exit status") {
  const fs::path dir = scratch("binary");
  const auto good = dir / "good.json";
  const auto bad = dir / "bad.json";
  auto j = sphere_manifest();
  j["output_dir"] = (dir / "out").string();
  std::ofstream(good) << j.dump();
  j["scenarios"].push_back({{"id", "levitate"}});
  std::ofstream(bad) << j.dump();
  const std::string bin = SIGMAK_CLI_PATH;
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status(bin + " run " + good.string()) == 0);
  CHECK(fs::exists(dir / "out" / "run_record.json"));
  CHECK(status(bin + " run " + bad.string()) == 2);
  CHECK(status(bin + " run " + std::string(SIGMAK_TEST_DATA) + "/broken_hypothesis.json --out " + (dir / "broken").string()) == 1);
  CHECK(status(bin + " study " + good.string() + " --res 9") == 2);
  CHECK(status(bin + " frobnicate") != 0);
}
