#include "sigmak/equation/problem.hpp"

#include "sigmak/equation/evaluate.hpp"

#include <cmath>

#include "sigmak/common/errors.hpp"
#include "sigmak/common/parallel.hpp"
#include "sigmak/geometry/curvature.hpp"
#include "sigmak/geometry/pointwise.hpp"

namespace sigmak::equation {

using geometry::ChartGrid;
using geometry::MetricField;
using geometry::ScalarField;
using geometry::Tensor2Field;

std::string to_string(Branch b) { return b == Branch::W ? "W" : "V"; }

void validate_problem(const ProblemSpec& spec, const ChartGrid& grid) {
  const int n = grid.dim();
  require(spec.op.n() == n, ErrorKind::dimension,
          "operator dimension " + std::to_string(spec.op.n()) + " does not match chart dimension " + std::to_string(n));
  require(spec.S.n == n && spec.S.grid == grid, ErrorKind::dimension, "S does not live on the problem grid");
  require(std::isfinite(spec.t), ErrorKind::argument, "t must be finite");
  if (spec.branch == Branch::W)
    require(spec.t <= 1.0, ErrorKind::argument, "W branch needs t <= 1, got t = " + std::to_string(spec.t));
  else
    require(spec.t >= n - 1.0, ErrorKind::argument,
            "V branch needs t >= n-1 = " + std::to_string(n - 1) + ", got t = " + std::to_string(spec.t));
  for (const auto* param : {&spec.a, &spec.b, &spec.rhs.psi})
    if (param->field) require(param->field->grid == grid, ErrorKind::argument, "coefficient field on a different grid");
}

Tensor2Field source_from_json(const nlohmann::json& j, const MetricField& g, double t_default) {
  const std::string kind = j.value("kind", std::string("schouten"));
  const double sign = j.value("negate", false) ? -1.0 : 1.0;
  Tensor2Field S(g.grid(), geometry::TensorRole::S);
  if (kind == "schouten") {
    S = geometry::schouten(g);
  } else if (kind == "modified_schouten") {
    S = geometry::modified_schouten(g, j.value("t", t_default));
  } else if (kind == "metric_multiple") {
    const double c = j.at("c").get<double>();
    for (std::size_t p = 0; p < g.grid().size(); ++p) S.set(p, c * g.matrix(p));
  } else if (kind != "zero") {
    fail(ErrorKind::validation, "unknown S selector '" + kind + "'");
  }
  S.role = geometry::TensorRole::S;
  if (sign < 0.0)
    for (double& v : S.values) v = -v;
  return S;
}

ScalarParameter parameter_from_json(const nlohmann::json& j, const ChartGrid& grid) {
  if (j.is_number()) return ScalarParameter::of(j.get<double>());
  require(j.is_object(), ErrorKind::validation, "coefficient must be a number or an object");
  const double base = j.value("base", 0.0);
  const double amp = j.value("amplitude", 0.0);
  const double m = j.value("wavenumber", 1.0);
  if (amp == 0.0) return ScalarParameter::of(base);
  ScalarField f(grid, geometry::ScalarRole::generic, 0.0);
  double x[geometry::kMaxDim];
  for (std::size_t p = 0; p < grid.size(); ++p) {
    grid.coords(p, x);
    f.values[p] = base + amp * std::cos(m * x[0]);
  }
  return ScalarParameter::of(std::move(f));
}

ScalarField psi_for_zero_solution(const ProblemSpec& spec, const MetricField& g) {
  const ChartGrid& grid = g.grid();
  ScalarField psi(grid, geometry::ScalarRole::f, 0.0);
  geometry::dispatch_dim(grid.dim(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    for_each_index(grid.size(), [&](std::size_t p) {
      const geometry::Mat<D> gm = g.at<D>(p);
      Eigen::GeneralizedSelfAdjointEigenSolver<geometry::Mat<D>> es(spec.S.at<D>(p), gm, Eigen::EigenvaluesOnly);
      const geometry::Vec<D> lam = es.eigenvalues();
      const std::span<const double> l(lam.data(), D);
      if (!symfunc::in_cone(l, spec.op.cone()))
        fail(ErrorKind::admissibility, "S is not admissible at point " + std::to_string(p) + ", u = 0 cannot solve");
      // f(x, 0) = psi for every rhs kind.
      psi.values[p] = symfunc::evaluate_F(spec.op, l);
    });
  });
  return psi;
}

ScalarField psi_for_state(const ProblemSpec& spec, const MetricField& g, const ScalarField& u) {
  ProblemSpec unit = spec;
  unit.rhs.psi = ScalarParameter::of(1.0);
  const auto ev = evaluate_equation(u, g, unit);
  if (ev.inadmissible_count > 0)
    fail(ErrorKind::admissibility, "target state is not admissible at " + std::to_string(ev.inadmissible_count) + " points");
  ScalarField psi(g.grid(), geometry::ScalarRole::f, 0.0);
  for (std::size_t p = 0; p < psi.size(); ++p) {
    double fz;
    const double base = rhs_value(unit.rhs, 1.0, u.values[p], &fz);
    psi.values[p] = (ev.residual.values[p] + base) / base;
  }
  return psi;
}

RhsModel rhs_from_json(const nlohmann::json& j, const MetricField& g, const ProblemSpec& partial) {
  RhsModel m;
  const std::string kind = j.value("kind", std::string("exp_decay"));
  if (kind == "exp_decay") {
    m.kind = RhsKind::exp_decay;
    m.k_exp = j.value("k", partial.op.k());
  } else if (kind == "exp_linear") {
    m.kind = RhsKind::exp_linear;
    m.c = j.at("c").get<double>();
  } else if (kind == "quadratic") {
    m.kind = RhsKind::quadratic;
    m.c = j.at("c").get<double>();
  } else {
    fail(ErrorKind::validation, "unknown rhs kind '" + kind + "'");
  }
  m.Lambda = j.value("Lambda", 0.0);
  const nlohmann::json psi = j.value("psi", nlohmann::json(1.0));
  if (psi.is_string()) {
    require(psi.get<std::string>() == "match_zero", ErrorKind::validation, "psi string must be 'match_zero'");
    m.psi = ScalarParameter::of(psi_for_zero_solution(partial, g));
  } else {
    m.psi = parameter_from_json(psi, g.grid());
  }
  require(m.psi.min() > 0.0, ErrorKind::model, "psi must be positive");
  return m;
}

ProblemSpec problem_from_json(const nlohmann::json& j, const MetricField& g) {
  const int n = g.grid().dim();
  const std::string branch = j.value("branch", std::string("W"));
  require(branch == "W" || branch == "V", ErrorKind::validation, "branch must be 'W' or 'V'");
  nlohmann::json op = j.value("operator", nlohmann::json{{"k", 1}});
  if (!op.contains("n")) op["n"] = n;
  const double t = j.value("t", 1.0);
  ProblemSpec spec{branch == "W" ? Branch::W : Branch::V,
                   t,
                   parameter_from_json(j.value("a", nlohmann::json(1.0)), g.grid()),
                   parameter_from_json(j.value("b", nlohmann::json(-0.5)), g.grid()),
                   source_from_json(j.value("S", nlohmann::json{{"kind", "schouten"}}), g, t),
                   symfunc::operator_from_json(op),
                   RhsModel{}};
  spec.rhs = rhs_from_json(j.value("rhs", nlohmann::json::object()), g, spec);
  validate_problem(spec, g.grid());
  return spec;
}

nlohmann::json describe(const ProblemSpec& spec) {
  auto param = [](const ScalarParameter& p) -> nlohmann::json {
    if (p.is_constant()) return p.constant;
    return {{"min", p.min()}, {"max", p.max()}};
  };
  nlohmann::json op;
  symfunc::to_json(op, spec.op);
  return {{"branch", to_string(spec.branch)},
          {"t", spec.t},
          {"a", param(spec.a)},
          {"b", param(spec.b)},
          {"operator", op},
          {"rhs", {{"kind", to_string(spec.rhs.kind)}, {"k", spec.rhs.k_exp}, {"c", spec.rhs.c}, {"psi", param(spec.rhs.psi)},
                   {"Lambda", spec.rhs.Lambda}}}};
}

}  // namespace sigmak::equation
