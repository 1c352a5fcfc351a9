#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigmak/common/parallel.hpp"
#include "sigmak/equation/problem.hpp"

namespace sigmak::estimates {

/// Structure constants of the estimate being exercised. Each supplied value is checked
/// pointwise against a(x), b(x), t and the cone:
///   W branch: delta1: (1-t)/(n-2) a - b >= delta1;  delta3: a + n b <= -delta3 and a >= 0
///   V branch: delta1: (t-1)/(n-2) a + b >= delta1;  delta3: a + n b >= delta3 and a >= 0
///   delta2: min(2ab + b^2, b^2) >= delta2 and the cone lies in Gamma_2 (k >= 2)
struct Hypotheses {
  std::optional<double> delta1, delta2, delta3;
};

/// One fitted inequality LHS <= RHS(C). `constant` is the smallest C >= 0 that makes it hold
/// over the ball; `lhs`, `rhs` are taken at the point where the fit is attained.
struct BoundCheck {
  std::string id;
  double constant = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs at that point
  std::size_t point = 0;
  bool pass = false;    // finite constant and lhs <= rhs + tol everywhere
};

struct EstimateReport {
  equation::Branch branch = equation::Branch::W;
  double r = 0.0;
  double sup_grad_sq = 0.0;  // over B_{r/2}
  double sup_hess = 0.0;     // g-Frobenius, over B_{r/2}
  double K_min = 0.0;        // over B_r
  double K_max = 0.0;
  std::string K_branch;      // "K_positive" or "K_nonpositive"
  double min_trace = 0.0;    // min of tr_g T over B_r; non-negative in the positive cones
  double trace_identity_error = 0.0;
  std::vector<BoundCheck> bounds;
  std::string boundary_max_location;  // filled by callers that also run the boundary-max test
};

/// Bound ids:
///   grad_by_trace   |du|^2 <= (c K + C) / (n delta1), c = 1 + n(1-t)/(n-2) (W) or n(t-1)/(n-2) - 1 (V)
///   grad_by_K       |du|^2 <= C (K + 1)
///   hess_by_K       |Hess u| <= C (K + 1)
///   grad_by_lap     |du|^2 <= C (Lap u + 1)              (needs delta3)
///   trace_nonneg    0 <= tr_g T                          (admissibility)
/// grad_by_trace needs delta1. Throws a hypothesis error naming the failed condition, an
/// argument error when no constant is supplied, and an admissibility error for inadmissible u.
EstimateReport check_bounds(const geometry::ScalarField& u, const geometry::MetricField& g, const equation::ProblemSpec& spec,
                            const Hypotheses& hyp, double r, Exec exec = default_exec());

/// Throws a hypothesis error if a supplied constant is violated anywhere on the grid.
void check_hypotheses(const equation::ProblemSpec& spec, const geometry::ChartGrid& grid, const Hypotheses& hyp);

/// Relative agreement of the fitted constants of two reports (same ids): |C1 - C2| <= tol max(C1, C2),
/// or both below `floor`.
struct StabilityCheck {
  std::string id;
  double coarse = 0.0, fine = 0.0, ratio = 1.0;
  bool pass = false;
};
std::vector<StabilityCheck> compare_constants(const EstimateReport& coarse, const EstimateReport& fine, double tol = 0.25,
                                              double floor = 1e-10);

nlohmann::json to_json(const EstimateReport& report);
/// scenario,id,constant,lhs,rhs,margin,point,pass
void write_bounds_csv_header(std::ostream& os);
void write_bounds_csv(std::ostream& os, const std::string& scenario, const EstimateReport& report);

}  // namespace sigmak::estimates
