#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sigmak/equation/evaluate.hpp"
#include "sigmak/geometry/sparse_solver.hpp"

namespace sigmak::solver {

struct SolverConfig {
  int max_newton_iters = 30;
  double residual_tol = 1e-10;
  double shrink = 0.5;                  // backtracking factor
  double min_step = 1.0 / 1024.0;       // smallest step length tried
  double admissibility_margin = 1e-10;  // minimum cone distance along the line search
  geometry::Ordering linear_solver = geometry::Ordering::nested_dissection;
};

void validate(const SolverConfig& cfg);
SolverConfig solver_config_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const SolverConfig& cfg);

enum class NewtonStatus { converged, max_iterations, stalled, singular };
std::string to_string(NewtonStatus s);

struct IterationLog {
  int iteration = 0;
  double residual = 0.0;       // max norm before the step
  double step = 0.0;           // accepted step length, 0 on the last line
  double min_cone_distance = 0.0;
};

struct NewtonReport {
  NewtonStatus status = NewtonStatus::max_iterations;
  int iterations = 0;
  double final_residual = 0.0;
  double final_min_cone_distance = 0.0;
  long pinned_point = -1;  // gauge pin on closed charts with u-independent f
  std::vector<IterationLog> history;
  std::string message;
};

struct NewtonResult {
  geometry::ScalarField u;
  NewtonReport report;
};

/// Damped Newton for F(g^{-1} T(u)) = f(x, u). Throws a precondition error if u0 is not
/// admissible and a safeguard error if no step keeps the iterate admissible.
NewtonResult newton_solve(const geometry::ScalarField& u0, const equation::GeometryCache& geo,
                          const equation::ProblemSpec& spec, const SolverConfig& cfg = {}, Exec exec = default_exec());
NewtonResult newton_solve(const geometry::ScalarField& u0, const geometry::MetricField& g, const equation::ProblemSpec& spec,
                          const SolverConfig& cfg = {}, Exec exec = default_exec());

/// Ratios r_{k+1} / r_k^2 over the last `count` steps whose r_{k+1} lies above `floor`;
/// a step that lands on round-off says nothing about the rate.
std::vector<double> quadratic_ratios(const NewtonReport& report, int count = 3, double floor = 1e-13);

void write_log_csv(std::ostream& os, const NewtonReport& report);

}  // namespace sigmak::solver
