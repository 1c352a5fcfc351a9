#include "sigmak/cli/manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sigmak/common/errors.hpp"
#include "sigmak/geometry/metric_models.hpp"
#include "sigmak/solver/newton.hpp"

namespace sigmak::cli {

namespace {

using nlohmann::json;

enum class T { number, integer, string, boolean, object, array, number_or_object, number_or_string_or_object };

struct Field {
  const char* name;
  T type;
  bool required = false;
};

bool type_ok(const json& v, T t) {
  switch (t) {
    case T::number: return v.is_number();
    case T::integer: return v.is_number_integer();
    case T::string: return v.is_string();
    case T::boolean: return v.is_boolean();
    case T::object: return v.is_object();
    case T::array: return v.is_array();
    case T::number_or_object: return v.is_number() || v.is_object();
    case T::number_or_string_or_object: return v.is_number() || v.is_string() || v.is_object();
  }
  return false;
}

const char* type_name(T t) {
  switch (t) {
    case T::number: return "a number";
    case T::integer: return "an integer";
    case T::string: return "a string";
    case T::boolean: return "a boolean";
    case T::object: return "an object";
    case T::array: return "an array";
    case T::number_or_object: return "a number or an object";
    case T::number_or_string_or_object: return "a number, a string or an object";
  }
  return "?";
}

[[noreturn]] void bad(const std::string& path, const std::string& what) { fail(ErrorKind::validation, path + ": " + what); }

void check_fields(const json& j, const std::string& path, const std::vector<Field>& fields) {
  if (!j.is_object()) bad(path, "must be an object");
  for (const auto& f : fields) {
    const auto it = j.find(f.name);
    const std::string fp = path.empty() ? f.name : path + "." + f.name;
    if (it == j.end()) {
      if (f.required) bad(fp, "missing required field");
      continue;
    }
    if (!type_ok(*it, f.type)) bad(fp, std::string("must be ") + type_name(f.type));
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool known = std::any_of(fields.begin(), fields.end(), [&](const Field& f) { return it.key() == f.name; });
    if (!known) bad(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
  }
}

void check_one_of(const json& j, const char* key, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.contains(key)) return;
  const std::string v = j.at(key).get<std::string>();
  for (const char* a : allowed)
    if (v == a) return;
  bad(path + "." + key, "unknown value '" + v + "'");
}

void check_number_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) bad(path, "must be a non-empty array of numbers");
  for (const auto& v : j)
    if (!v.is_number()) bad(path, "must be a non-empty array of numbers");
}

void check_profile(const json& j, const std::string& path) {
  check_fields(j, path, {{"kind", T::string, true}, {"amplitude", T::number}, {"factors", T::array},
                         {"tangential", T::number}, {"normal", T::number}, {"modes", T::integer}});
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") return;
  if (kind == "trig") {
    if (!j.contains("factors")) bad(path + ".factors", "missing required field");
    std::size_t i = 0;
    for (const auto& f : j.at("factors")) {
      const std::string fp = path + ".factors[" + std::to_string(i++) + "]";
      if (!f.is_array() || f.size() != 2 || !f[0].is_string() || !f[1].is_number())
        bad(fp, "must be [\"sin\"|\"cos\", wavenumber]");
      const std::string fn = f[0].get<std::string>();
      if (fn != "sin" && fn != "cos") bad(fp, "unknown factor '" + fn + "'");
    }
    return;
  }
  if (kind == "quadratic") return;
  if (kind == "random_modes") {
    if (j.contains("modes") && j.at("modes").get<long>() < 1) bad(path + ".modes", "must be positive");
    return;
  }
  bad(path + ".kind", "unknown profile '" + kind + "'");
}

void check_state(const json& j, const std::string& path) {
  check_fields(j, path, {{"profile", T::object}, {"perturbation", T::object}, {"solve", T::boolean}});
  if (j.contains("profile")) check_profile(j.at("profile"), path + ".profile");
  if (j.contains("perturbation")) {
    const auto& p = j.at("perturbation");
    const std::string pp = path + ".perturbation";
    check_fields(p, pp, {{"kind", T::string}, {"amplitude", T::number, true}});
    check_one_of(p, "kind", pp, {"cosine", "random"});
  }
}

void check_problem(const json& j) {
  check_fields(j, "problem", {{"branch", T::string}, {"t", T::number}, {"a", T::number_or_object},
                              {"b", T::number_or_object}, {"S", T::object}, {"operator", T::object},
                              {"rhs", T::object}});
  check_one_of(j, "branch", "problem", {"W", "V"});
  if (j.contains("a")) {
    if (j.at("a").is_object())
      check_fields(j.at("a"), "problem.a", {{"base", T::number}, {"amplitude", T::number}, {"wavenumber", T::number}});
  }
  if (j.contains("b")) {
    if (j.at("b").is_object())
      check_fields(j.at("b"), "problem.b", {{"base", T::number}, {"amplitude", T::number}, {"wavenumber", T::number}});
  }
  if (j.contains("S")) {
    check_fields(j.at("S"), "problem.S", {{"kind", T::string}, {"t", T::number}, {"c", T::number}, {"negate", T::boolean}});
    check_one_of(j.at("S"), "kind", "problem.S", {"schouten", "modified_schouten", "metric_multiple", "zero"});
    if (j.at("S").value("kind", std::string("schouten")) == "metric_multiple" && !j.at("S").contains("c"))
      bad("problem.S.c", "missing required field");
  }
  if (j.contains("operator")) {
    check_fields(j.at("operator"), "problem.operator", {{"kind", T::string}, {"k", T::integer}, {"l", T::integer}, {"n", T::integer}});
  }
  if (j.contains("rhs")) {
    const auto& r = j.at("rhs");
    check_fields(r, "problem.rhs", {{"kind", T::string}, {"k", T::integer}, {"c", T::number},
                                    {"psi", T::number_or_string_or_object}, {"Lambda", T::number}});
    check_one_of(r, "kind", "problem.rhs", {"exp_decay", "exp_linear", "quadratic"});
    if (r.contains("psi") && r.at("psi").is_string()) check_one_of(r, "psi", "problem.rhs", {"match_zero", "match_state"});
    if (r.contains("psi") && r.at("psi").is_object())
      check_fields(r.at("psi"), "problem.rhs.psi", {{"base", T::number}, {"amplitude", T::number}, {"wavenumber", T::number}});
  }
}

const std::map<std::string, std::vector<Field>>& scenario_fields() {
  static const std::map<std::string, std::vector<Field>> table = {
      {"newton", {{"state", T::object}}},
      {"continuation",
       {{"branch", T::string}, {"k", T::integer}, {"t_start", T::number}, {"t_end", T::number},
        {"initial_fraction", T::number}, {"floor_fraction", T::number}, {"v_margin", T::number},
        {"halving_check", T::boolean}}},
      {"roundtrip", {{"state", T::object}}},
      {"bounds",
       {{"state", T::object}, {"delta1", T::number}, {"delta2", T::number}, {"delta3", T::number}, {"r", T::number},
        {"refine", T::boolean}, {"tol", T::number}}},
      {"boundary_max", {{"state", T::object}, {"p_list", T::array}, {"r", T::number}, {"bc_tol", T::number}}},
      {"ellipticity", {{"state", T::object}}},
      {"functionals", {{"state", T::object}, {"k", T::array}}},
      {"cutoff", {{"r", T::number}}},
      {"property_sweep", {{"samples", T::integer}, {"amplitude", T::number}}},
  };
  return table;
}

void check_scenario_params(const ScenarioSpec& s, const std::string& path) {
  const auto& fields = scenario_fields().at(s.id);
  check_fields(s.params, path, fields);
  const auto& p = s.params;
  if (p.contains("state")) check_state(p.at("state"), path + ".state");
  if (s.id == "continuation") check_one_of(p, "branch", path, {"W", "V"});
  if (s.id == "boundary_max") {
    if (!p.contains("p_list")) bad(path + ".p_list", "missing required field");
    check_number_list(p.at("p_list"), path + ".p_list");
  }
  if (s.id == "functionals" && p.contains("k")) {
    for (const auto& k : p.at("k"))
      if (!k.is_number_integer()) bad(path + ".k", "must be an array of integers");
  }
  if (s.id == "bounds" && !p.contains("delta1") && !p.contains("delta3"))
    bad(path, "bounds needs delta1 or delta3");
  if (s.id == "property_sweep" && p.contains("samples") && p.at("samples").get<long>() < 1)
    bad(path + ".samples", "must be positive");
  for (const char* key : {"r", "bc_tol", "tol", "initial_fraction", "floor_fraction", "v_margin"}) {
    if (p.contains(key) && !(p.at(key).get<double>() > 0.0)) bad(path + "." + key, "must be positive");
  }
}

}  // namespace

const std::vector<std::string>& known_scenarios() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [k, f] : scenario_fields()) v.push_back(k);
    return v;
  }();
  return ids;
}

bool supports_study(const std::string& id) { return id == "roundtrip" || id == "newton"; }

bool needs_problem(const std::string& id) {
  return id == "newton" || id == "bounds" || id == "boundary_max" || id == "ellipticity";
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentManifest parse_manifest(const json& j) {
  check_fields(j, "", {{"chart", T::object, true}, {"metric", T::object, true}, {"problem", T::object},
                       {"solver", T::object}, {"scenarios", T::array, true}, {"output_dir", T::string},
                       {"seed", T::integer}, {"description", T::string}});
  ExperimentManifest m;
  m.raw = j;
  m.hash = fnv1a_hex(j.dump());
  m.chart = j.at("chart");
  m.metric = j.at("metric");
  m.problem = j.value("problem", json());
  m.solver = j.value("solver", json::object());
  m.output_dir = j.value("output_dir", m.output_dir);
  if (j.contains("seed")) {
    if (j.at("seed").get<long long>() < 0) bad("seed", "must be non-negative");
    m.seed = j.at("seed").get<std::uint64_t>();
  }

  check_fields(m.chart, "chart", {{"kind", T::string, true}, {"n", T::integer, true}, {"resolution", T::integer, true},
                                  {"r", T::number}, {"outer_bc", T::string}});
  check_fields(m.metric, "metric", {{"model", T::string, true}, {"params", T::object}});
  try {
    chart_of(m);
  } catch (const Error& e) {
    bad("chart", e.what());
  }
  try {
    geometry::metric_model_from_json(m.metric)->check_chart(chart_of(m));
  } catch (const Error& e) {
    bad("metric", e.what());
  } catch (const json::exception& e) {
    bad("metric", e.what());
  }
  try {
    solver::solver_config_from_json(m.solver);
  } catch (const Error& e) {
    bad("solver", e.what());
  } catch (const json::exception& e) {
    bad("solver", e.what());
  }
  if (!m.problem.is_null()) check_problem(m.problem);

  const auto& list = j.at("scenarios");
  if (list.empty()) bad("scenarios", "must list at least one scenario");
  std::set<std::string> names;
  const auto& ids = known_scenarios();
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "scenarios[" + std::to_string(i) + "]";
    ScenarioSpec s;
    const json& e = list[i];
    if (e.is_string()) {
      s.id = e.get<std::string>();
    } else if (e.is_object()) {
      check_fields(e, path, {{"id", T::string, true}, {"name", T::string}, {"params", T::object}});
      s.id = e.at("id").get<std::string>();
      s.name = e.value("name", std::string());
      s.params = e.value("params", json::object());
    } else {
      bad(path, "must be a scenario id or an object");
    }
    if (std::find(ids.begin(), ids.end(), s.id) == ids.end()) bad(path + ".id", "unknown scenario '" + s.id + "'");
    if (needs_problem(s.id) && m.problem.is_null()) bad("problem", "required by scenario '" + s.id + "'");
    if (s.name.empty()) s.name = s.id;
    if (s.name.find_first_of("/\\ ") != std::string::npos) bad(path + ".name", "must not contain spaces or slashes");
    if (!names.insert(s.name).second) bad(path + ".name", "duplicate scenario name '" + s.name + "'");
    check_scenario_params(s, path + ".params");
    m.scenarios.push_back(std::move(s));
  }
  return m;
}

ExperimentManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::io, "cannot read manifest '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::validation, "manifest '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_manifest(j);
}

geometry::ChartGrid chart_of(const ExperimentManifest& m) { return geometry::chart_from_json(m.chart); }

geometry::ChartGrid chart_at(const ExperimentManifest& m, int resolution) {
  auto c = m.chart;
  c["resolution"] = resolution;
  return geometry::chart_from_json(c);
}

}  // namespace sigmak::cli
