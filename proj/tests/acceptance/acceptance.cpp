// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/symfunc_oracles.hpp"
#include "sigmak/cli/manifest.hpp"
#include "sigmak/cli/runner.hpp"
#include "sigmak/cli/study.hpp"
#include "sigmak/common/errors.hpp"
#include "sigmak/symfunc/elementary.hpp"
#include "sigmak/symfunc/operator_family.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sigmak;

namespace {

const fs::path kData = SIGMAK_TEST_DATA;
const fs::path kOut = SIGMAK_ACCEPTANCE_OUT;

const std::vector<std::string> kRegression = {"regression_sphere_W",  "regression_sphere_Wt0",  "regression_sphere_V",
                                              "regression_torus_W",   "regression_halfball_T1", "regression_halfball_fermi"};

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Runs the scenarios of a data manifest whose id is in `ids` (all when empty).
cli::RunRecord run_subset(const std::string& name, const std::set<std::string>& ids, const std::string& tag) {
  auto j = read_json(kData / (name + ".json"));
  if (!ids.empty()) {
    json keep = json::array();
    for (const auto& s : j["scenarios"]) {
      const std::string id = s.is_string() ? s.get<std::string>() : s.at("id").get<std::string>();
      if (ids.count(id)) keep.push_back(s);
    }
    j["scenarios"] = keep;
  }
  cli::RunOptions o;
  o.out_dir = (kOut / tag / name).string();
  fs::remove_all(*o.out_dir);
  return cli::run(cli::parse_manifest(j), o);
}

Outcome symmetric_functions() {
  std::mt19937_64 rng(20261016);
  std::size_t samples = 0, nm_checks = 0, sigma_checks = 0;
  double worst_euler = 0.0, min_gsum = INFINITY, worst_nm = INFINITY, worst_sigma = 0.0;
  for (int n = 3; n <= 5; ++n) {
    for (int k = 1; k <= n; ++k) {
      const auto op = symfunc::OperatorSpec::sigma_root(n, k);
      for (int s = 0; s < 10000; ++s, ++samples) {
        const auto lam = oracle::random_cone_point(rng, n, k);
        const double f = symfunc::evaluate_F(op, lam);
        const auto g = symfunc::F_gradient(op, lam);
        double euler = 0.0, gsum = 0.0;
        for (std::size_t i = 0; i < lam.size(); ++i) {
          euler += lam[i] * g[i];
          gsum += g[i];
        }
        worst_euler = std::max(worst_euler, std::abs(euler - f) / std::abs(f));
        min_gsum = std::min(min_gsum, gsum);

        const auto edge = oracle::random_cone_point(rng, n, k, 0.0);
        for (int l = 1; l < k; ++l, ++nm_checks) {
          const double r = symfunc::newton_maclaurin_residual(edge, k, l);
          const double scale = l * (n - k + 1) * std::abs(oracle::sigma_enum(edge, l) * oracle::sigma_enum(edge, k - 1)) +
                               k * (n - l + 1) * std::abs(oracle::sigma_enum(edge, l - 1) * oracle::sigma_enum(edge, k));
          worst_nm = std::min(worst_nm, r / scale);
        }
      }
    }
  }
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 1; n <= 8; ++n) {
    for (int s = 0; s < 10000; ++s) {
      std::vector<double> lam(static_cast<std::size_t>(n));
      for (auto& x : lam) x = u(rng);
      for (int k = 0; k <= n; ++k, ++sigma_checks) {
        const double err = std::abs(symfunc::sigma(lam, k) - oracle::sigma_enum(lam, k));
        worst_sigma = std::max(worst_sigma, err / oracle::sigma_abs_enum(lam, k));
      }
    }
  }
  Outcome o;
  o.pass = worst_euler <= 1e-10 && min_gsum >= 1.0 - 1e-12 && worst_nm >= -1e-12 && worst_sigma <= 1e-12;
  o.detail = std::to_string(samples) + " cone samples, euler rel " + fmt(worst_euler) + ", min grad sum " +
             fmt(min_gsum) + ", NM min rel " + fmt(worst_nm) + " over " + std::to_string(nm_checks) +
             ", sigma vs enumeration rel " + fmt(worst_sigma) + " over " + std::to_string(sigma_checks);
  return o;
}

Outcome roundtrip_study() {
  Outcome o;
  for (const char* name : {"roundtrip_torus3", "roundtrip_torus4"}) {
    const auto m = cli::load_manifest((kData / (std::string(name) + ".json")).string());
    const auto t = cli::convergence_study(m, {17, 33, 65});
    for (const auto& s : m.scenarios) {
      const auto q = t.orders(s.name);
      double last = NAN;
      for (const auto& r : t.rows)
        if (r.scenario == s.name && r.resolution == 65) last = r.error;
      bool ok = q.size() == 2 && !t.any_failed() && last <= 1e-3;
      for (double v : q) ok = ok && v >= 1.7 && v <= 2.3;
      o.pass = o.pass && ok;
      o.detail += std::string(o.detail.empty() ? "" : "; ") + name + " orders";
      for (double v : q) o.detail += " " + fmt(v);
      o.detail += ", error@65 " + fmt(last);
    }
  }
  return o;
}

Outcome sphere_exact() {
  const auto rec = run_subset("sphere_exact", {"newton"}, "c3");
  Outcome o;
  o.pass = !rec.scenarios.empty();
  for (const auto& s : rec.scenarios) {
    const int its = s.summary.value("iterations", -1);
    const double dev = s.summary.value("max_deviation", INFINITY);
    const auto ratios = s.summary.value("quadratic_ratios", std::vector<double>{});
    double qmax = 0.0;
    for (double r : ratios) qmax = std::max(qmax, r);
    o.pass = o.pass && s.status == "converged" && its >= 0 && its <= 10 && dev <= 1e-8 && !ratios.empty() && qmax < 10.0;
    o.detail = s.status + " in " + std::to_string(its) + " iterations, max|u| " + fmt(dev) + ", r_{k+1}/r_k^2 max " +
               fmt(qmax) + " over " + std::to_string(ratios.size()) + " steps";
  }
  return o;
}

Outcome continuation_path() {
  const auto rec = run_subset("continuation", {"continuation"}, "c4");
  Outcome o;
  bool halving_seen = false;
  o.pass = !rec.scenarios.empty();
  for (const auto& s : rec.scenarios) {
    bool ok = !s.failed;
    for (const char* run : {"base", "half"}) {
      if (!s.summary.contains(run)) continue;
      const auto& r = s.summary[run];
      ok = ok && r.value("completed", false) && r.value("min_node_cone_distance", -1.0) > 0.0 &&
           r.value("max_node_residual", INFINITY) <= 1e-8;
      o.detail += std::string(o.detail.empty() ? "" : "; ") + s.name + "/" + run + " " +
                  std::to_string(r.value("nodes", 0)) + " nodes, residual <= " + fmt(r.value("max_node_residual", NAN)) +
                  ", cone margin >= " + fmt(r.value("min_node_cone_distance", NAN));
    }
    if (s.summary.contains("halving_ok")) {
      halving_seen = true;
      ok = ok && s.summary["halving_ok"].get<bool>() &&
           s.summary["half"]["final_residual"].get<double>() <=
               std::max(s.summary["base"]["final_residual"].get<double>(), 1e-12);
    }
    o.pass = o.pass && ok;
  }
  o.pass = o.pass && halving_seen;
  o.detail += halving_seen ? "; halving checked" : "; no halving check ran";
  return o;
}

Outcome boundary_max() {
  const auto rec = run_subset("regression_halfball_T1", {"boundary_max"}, "c5");
  Outcome o;
  o.pass = rec.scenarios.size() == 1 && !rec.scenarios[0].failed && rec.scenarios[0].status == "ok";
  if (!o.pass) {
    o.detail = rec.scenarios.empty() ? "no scenario" : rec.scenarios[0].message;
    return o;
  }
  auto entries = rec.scenarios[0].summary["entries"];
  std::sort(entries.begin(), entries.end(), [](const json& a, const json& b) { return a["p"] < b["p"]; });
  double first = NAN;
  bool seen_interior = false, monotone = true;
  for (const auto& e : entries) {
    const bool interior = e["location"] == "interior";
    if (interior && !seen_interior) first = e["p"].get<double>();
    if (!interior && seen_interior) monotone = false;
    seen_interior = seen_interior || interior;
  }
  o.pass = seen_interior && first <= 64.0 && monotone && entries.size() >= 2;
  o.detail = "first interior p " + fmt(first) + " of " + std::to_string(entries.size()) + " tested, " +
             (monotone ? "monotone" : "not monotone") + ", state Newton iterations " +
             rec.scenarios[0].summary.value("state_newton_iterations", json(-1)).dump();
  return o;
}

Outcome bound_stability() {
  const std::set<std::string> required = {"grad_by_trace", "grad_by_K", "hess_by_K", "grad_by_lap"};
  Outcome o;
  double worst = 0.0;
  std::size_t compared = 0, scenarios = 0;
  for (const auto& name : kRegression) {
    const auto rec = run_subset(name, {"bounds"}, "c6");
    for (const auto& s : rec.scenarios) {
      ++scenarios;
      const auto& reps = s.summary.value("reports", json::array());
      if (s.failed || reps.size() != 2) {
        o.pass = false;
        o.detail += name + ": " + s.message + "; ";
        continue;
      }
      std::map<std::string, double> coarse;
      std::set<std::string> ids;
      for (const auto& b : reps[0]["bounds"])
        if (b["constant"].is_number()) coarse[b["id"]] = b["constant"].get<double>();
      for (const auto& b : reps[1]["bounds"]) {
        const std::string id = b["id"];
        if (!required.count(id) || !coarse.count(id) || !b["constant"].is_number()) continue;
        const double c = coarse[id], f = b["constant"].get<double>();
        const double hi = std::max(std::abs(c), std::abs(f));
        const double rel = hi <= 1e-10 ? 0.0 : std::abs(c - f) / hi;
        worst = std::max(worst, rel);
        ids.insert(id);
        ++compared;
        if (rel > 0.25) {
          o.pass = false;
          o.detail += name + "/" + id + " differs by " + fmt(rel) + "; ";
        }
      }
      if (ids != required) {
        o.pass = false;
        o.detail += name + " lacks some bound ids; ";
      }
    }
  }
  const auto broken = run_subset("broken_hypothesis", {}, "c6");
  bool guard = !broken.scenarios.empty();
  for (const auto& s : broken.scenarios)
    guard = guard && s.failed && s.message.find("hypothesis error") != std::string::npos;
  o.pass = o.pass && guard && scenarios == kRegression.size();
  o.detail += std::to_string(compared) + " constants over " + std::to_string(scenarios) +
              " scenarios, worst h vs h/2 relative change " + fmt(worst) + ", broken manifest guard " +
              (guard ? "fired" : "did not fire");
  return o;
}

Outcome ellipticity() {
  Outcome o;
  std::size_t states = 0;
  for (const auto& name : kRegression) {
    const auto m = read_json(kData / (name + ".json"));
    const std::string branch = m["problem"]["branch"];
    const double t = m["problem"]["t"];
    const int n = m["chart"]["n"];
    const bool in_range = branch == "W" ? t <= 1.0 : t >= n - 1.0;
    const auto rec = run_subset(name, {"ellipticity"}, "c7");
    for (const auto& s : rec.scenarios) {
      ++states;
      const long fv = s.summary.value("F_violations", -1L), pv = s.summary.value("PQ_violations", -1L);
      if (!in_range || s.failed || fv != 0 || pv != 0) {
        o.pass = false;
        o.detail += name + ": " + (s.message.empty() ? std::to_string(pv) + " P/Q violations" : s.message) + "; ";
      }
    }
  }
  o.pass = o.pass && states == kRegression.size();
  o.detail += std::to_string(states) + " states checked";
  return o;
}

Outcome determinism() {
  const fs::path a = kOut / "c8" / "a", b = kOut / "c8" / "b";
  fs::remove_all(kOut / "c8");
  const std::string cmd = std::string(SIGMAK_CLI_PATH) + " run " + (kData / "determinism.json").string() + " --out ";
  Outcome o;
  for (const auto& d : {a, b})
    if (std::system((cmd + d.string() + " > /dev/null").c_str()) != 0) {
      o.pass = false;
      o.detail = "cli run failed for " + d.string();
      return o;
    }
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (e.path().extension() != ".csv") continue;
    ++files;
    const auto other = b / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
      o.pass = false;
      o.detail += e.path().filename().string() + " differs; ";
    }
  }
  std::size_t files_b = 0;
  for (const auto& e : fs::directory_iterator(b)) files_b += e.path().extension() == ".csv";
  o.pass = o.pass && files > 0 && files == files_b;
  o.detail += std::to_string(files) + " CSV files compared byte for byte";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit_seconds;  // 0: no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "symmetric functions", 30, symmetric_functions},
      {2, "conformal round-trip order", 120, roundtrip_study},
      {3, "sphere exact solution", 60, sphere_exact},
      {4, "continuation path", 300, continuation_path},
      {5, "boundary maximum test", 60, boundary_max},
      {6, "bound constant stability", 180, bound_stability},
      {7, "ellipticity certificates", 0, ellipticity},
      {8, "determinism", 0, determinism},
  };
  fs::create_directories(kOut);
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt(secs) + " s";
    if (c.limit_seconds > 0) {
      timing += " / " + fmt(c.limit_seconds) + " s";
      if (secs > c.limit_seconds) o.pass = false;
    }
    all = all && o.pass;
    std::cout << "criterion " << c.id << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << c.title << ": " << o.detail << " ["
              << timing << "]" << std::endl;
  }
  return all ? 0 : 1;
}
