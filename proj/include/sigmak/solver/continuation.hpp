#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sigmak/solver/newton.hpp"

namespace sigmak::solver {

/// The family F(g^{-1} A^t_u) = f e^{2u}, where A^t_u is the modified Schouten tensor of
/// e^{-2u} g and f = F(g^{-1} A^a_g), so u = 0 solves at the start t = a.
/// V branch: -A^t in place of A^t, with t decreasing from t_start to n - 1 + margin.
/// Residual treated as round-off when polishing the last node and comparing path refinements.
inline constexpr double kContinuationRoundoff = 1e-12;

struct ContinuationConfig {
  equation::Branch branch = equation::Branch::W;
  std::optional<double> t_start;  // default: chosen from {0, -1, -2, -4, ...} (W) or {2(n-1), 4(n-1), ...} (V)
  std::optional<double> t_end;    // default: 1 (W) or n - 1 + v_margin (V)
  double v_margin = 1e-2;
  double initial_fraction = 1.0 / 20.0;  // of |t_end - t_start|
  double floor_fraction = 1.0 / 2048.0;
  SolverConfig newton;
};

struct PathNode {
  double t = 0.0;
  double residual = 0.0;
  double min_cone_distance = 0.0;
  double sup_grad_sq = 0.0;
  double sup_hess = 0.0;
  double sup_c2 = 0.0;  // sup (|Hess u| + |du|^2)
  double K_min = 0.0;
  double K_max = 0.0;
  int newton_iterations = 0;
};

struct ContinuationResult {
  bool completed = false;
  double t_start = 0.0;
  double t_end = 0.0;
  double t_current = 0.0;
  geometry::ScalarField u;
  std::vector<PathNode> path;
  std::string failure;
};

/// Problem at parameter t for the family above, with psi = F(g^{-1} A^a) fixed.
equation::ProblemSpec family_problem(const geometry::MetricField& g, const symfunc::OperatorSpec& op,
                                     equation::Branch branch, double t, const geometry::Tensor2Field& St,
                                     const geometry::ScalarField& psi);

/// Largest a in {0, -1, -2, -4, ...} with A^a positive definite (W), or the smallest t in
/// {2(n-1), 4(n-1), ...} with -A^t positive definite (V). Throws a precondition error if none up to 2^20.
double choose_start(const geometry::MetricField& g, equation::Branch branch);

ContinuationResult continuation_in_t(const geometry::MetricField& g, const symfunc::OperatorSpec& op,
                                     const ContinuationConfig& cfg = {}, Exec exec = default_exec());

void write_path_csv(std::ostream& os, const ContinuationResult& result);

}  // namespace sigmak::solver
