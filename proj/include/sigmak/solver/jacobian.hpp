#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Sparse>

#include "sigmak/equation/evaluate.hpp"

namespace sigmak::solver {

/// Grid points carrying an unknown. Dirichlet points and an optional gauge pin hold their values.
struct UnknownMap {
  std::vector<std::size_t> points;  // unknown k -> grid index
  std::vector<int> slot;            // grid index -> unknown k, or -1
  long pinned = -1;

  std::size_t size() const { return points.size(); }
};

UnknownMap make_unknowns(const geometry::ChartGrid& grid, long pin = -1);

struct NewtonSystem {
  Eigen::SparseMatrix<double> J;  // d residual / d u restricted to the unknowns
  Eigen::VectorXd r;              // residual at the unknowns
};

/// Residual and Jacobian of F(g^{-1} T(u)) - f(x, u). Throws an admissibility error at an
/// inadmissible point, since F has no derivative there.
NewtonSystem assemble_system(const geometry::ScalarField& u, const equation::GeometryCache& geo,
                             const equation::ProblemSpec& spec, const UnknownMap& unknowns, Exec exec = default_exec());

}  // namespace sigmak::solver
