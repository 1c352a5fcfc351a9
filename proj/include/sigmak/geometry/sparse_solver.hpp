#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "sigmak/geometry/grid.hpp"

namespace sigmak::geometry {

/// Geometric nested dissection of the grid: recursive bisection of the index box
/// along its longest axis, separator plane numbered last. Returns grid indices in
/// elimination order.
std::vector<std::size_t> nested_dissection_order(const ChartGrid& grid, int leaf = 4);

inline constexpr double kSingularCondition = 1e13;

enum class Ordering { nested_dissection, colamd };

/// Sparse LU for systems whose unknowns are a subset of grid points.
/// `unknown_points[k]` is the grid index of unknown k.
class SparseDirectSolver {
 public:
  SparseDirectSolver(const ChartGrid& grid, std::vector<std::size_t> unknown_points,
                     Ordering ordering = Ordering::nested_dissection);
  ~SparseDirectSolver();
  SparseDirectSolver(const SparseDirectSolver&) = delete;
  SparseDirectSolver& operator=(const SparseDirectSolver&) = delete;

  /// Factorises A; throws a numerical error when the matrix is structurally
  /// singular or its condition estimate exceeds kSingularCondition.
  void factorize(const Eigen::SparseMatrix<double>& A);
  double condition_estimate() const;
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sigmak::geometry
