#pragma once

#include <string>

#include <json.hpp>

#include "sigmak/equation/rhs.hpp"
#include "sigmak/geometry/fields.hpp"
#include "sigmak/symfunc/operator_family.hpp"

namespace sigmak::equation {

enum class Branch { W, V };

std::string to_string(Branch b);

/// F(g^{-1} T) = f(x, u) with
///   W branch: T = Phi(u) + S
///   V branch: T = -Phi(u) + S
/// Phi(u) = Hess u + (1-t)/(n-2) (Lap u) g + a du(x)du + b |du|^2 g.
struct ProblemSpec {
  Branch branch = Branch::W;
  double t = 1.0;
  ScalarParameter a = ScalarParameter::of(1.0);
  ScalarParameter b = ScalarParameter::of(-0.5);
  geometry::Tensor2Field S;
  symfunc::OperatorSpec op;
  RhsModel rhs;

  double sign() const { return branch == Branch::W ? 1.0 : -1.0; }
  int n() const { return op.n(); }
  /// (1-t)/(n-2), the trace coefficient of Phi.
  double trace_coefficient() const { return (1.0 - t) / (n() - 2.0); }
};

/// Throws: dimension error when op.n or S does not match the grid, argument error when
/// t is outside the branch range (t <= 1 for W, t >= n-1 for V).
void validate_problem(const ProblemSpec& spec, const geometry::ChartGrid& grid);

/// Selector for S. kinds: "schouten", "modified_schouten" (param t, default problem t),
/// "metric_multiple" (param c: S = c g), "zero". "negate": true flips the sign.
geometry::Tensor2Field source_from_json(const nlohmann::json& j, const geometry::MetricField& g, double t_default);

/// a, b: number or {"base": c0, "amplitude": c1, "wavenumber": m} = c0 + c1 cos(m x_0).
ScalarParameter parameter_from_json(const nlohmann::json& j, const geometry::ChartGrid& grid);

/// rhs: {"kind": "exp_decay"|"exp_linear"|"quadratic", "k": int, "c": real,
///       "psi": number | "match_zero" | {base/amplitude/wavenumber}, "Lambda": real}.
/// "match_zero" sets psi so that u = 0 solves the equation exactly.
RhsModel rhs_from_json(const nlohmann::json& j, const geometry::MetricField& g, const ProblemSpec& partial);

/// {"branch": "W"|"V", "t", "a", "b", "S": {...}, "operator": {"k", "l"?, "kind"?}, "rhs": {...}}
ProblemSpec problem_from_json(const nlohmann::json& j, const geometry::MetricField& g);

/// psi(x) = F(lambda(g^{-1} S)): the right-hand side making u = 0 an exact solution.
geometry::ScalarField psi_for_zero_solution(const ProblemSpec& spec, const geometry::MetricField& g);

/// psi(x) = F(lambda(g^{-1} T(u))) / f(x, u)|_{psi = 1}: the right-hand side making u an exact
/// discrete solution. Throws an admissibility error when u is not admissible.
geometry::ScalarField psi_for_state(const ProblemSpec& spec, const geometry::MetricField& g, const geometry::ScalarField& u);

/// Description echoed into run records; fields are summarised by min/max.
nlohmann::json describe(const ProblemSpec& spec);

}  // namespace sigmak::equation
