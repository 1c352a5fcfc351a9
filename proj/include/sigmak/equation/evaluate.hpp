#pragma once

#include <cstdint>
#include <vector>

#include "sigmak/common/parallel.hpp"
#include "sigmak/equation/kernels.hpp"
#include "sigmak/equation/problem.hpp"

namespace sigmak::equation {

/// W = Hess u + (1-t)/(n-2) (Lap u) g + a du(x)du + b |du|^2 g + S. Requires the W branch.
geometry::Tensor2Field assemble_W(const geometry::ScalarField& u, const geometry::MetricField& g, const ProblemSpec& spec,
                                  Exec exec = default_exec());
/// V = (t-1)/(n-2) (Lap u) g - Hess u - a du(x)du - b |du|^2 g + S. Requires the V branch.
geometry::Tensor2Field assemble_V(const geometry::ScalarField& u, const geometry::MetricField& g, const ProblemSpec& spec,
                                  Exec exec = default_exec());
/// Whichever of W, V the branch selects.
geometry::Tensor2Field assemble_tensor(const geometry::ScalarField& u, const GeometryCache& geo, const ProblemSpec& spec,
                                       Exec exec = default_exec());

struct EquationEvaluation {
  geometry::ScalarField residual;      // F(lambda) - f(x, u); NaN where inadmissible
  geometry::ScalarField cone_distance; // per point
  std::vector<std::uint8_t> admissible;
  std::size_t inadmissible_count = 0;
  double max_residual = 0.0;           // over admissible points
  double min_cone_distance = 0.0;
};

/// Residual and admissibility mask. `skip_dirichlet` zeroes the residual on Dirichlet faces,
/// where u is data rather than unknown.
EquationEvaluation evaluate_equation(const geometry::ScalarField& u, const GeometryCache& geo, const ProblemSpec& spec,
                                     bool skip_dirichlet = false, Exec exec = default_exec());
EquationEvaluation evaluate_equation(const geometry::ScalarField& u, const geometry::MetricField& g, const ProblemSpec& spec,
                                     Exec exec = default_exec());

struct LinearizedCoefficients {
  Branch branch;
  geometry::Tensor2Field F;   // F^{ij}
  geometry::Tensor2Field PQ;  // P^{ij} on the W branch, Q^{ij} on the V branch
  geometry::ScalarField sumF; // F^{ij} g_ij
  double min_F_eigenvalue = 0.0;   // eigenvalues taken relative to g
  double min_PQ_eigenvalue = 0.0;
  std::size_t F_violations = 0;    // points with a non-positive eigenvalue
  std::size_t PQ_violations = 0;
};

/// P^{ij} = F^{ij} + (1-t)/(n-2) sumF g^{ij},  Q^{ij} = (t-1)/(n-2) sumF g^{ij} - F^{ij}.
/// Throws an admissibility error naming the first inadmissible point.
LinearizedCoefficients linearize(const geometry::ScalarField& u, const geometry::MetricField& g, const ProblemSpec& spec,
                                 Exec exec = default_exec());

}  // namespace sigmak::equation
