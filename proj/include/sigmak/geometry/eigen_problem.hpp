#pragma once

#include <Eigen/Sparse>

#include "sigmak/geometry/fields.hpp"

namespace sigmak::geometry {

struct EigenOptions {
  double shift = 0.0;              // test hook: solves for the operator L - shift
  double tolerance = 1e-12;        // relative change of the eigenvalue estimate
  int max_iterations = 2000;
  double geodesic_tolerance = 1e-8;
};

struct EigenResult {
  double lambda1 = 0.0;
  ScalarField phi;
  int iterations = 0;
  double residual = 0.0;  // max |(M - lambda1) phi|
};

/// Matrix of -(L - shift) = -Delta_g + (n-2)/(4(n-1)) R + shift with ghost-point
/// Neumann conditions on every non-periodic face, one row per grid point.
Eigen::SparseMatrix<double> conformal_laplacian_matrix(const MetricField& g, double shift = 0.0);

/// Smallest eigenvalue lambda1 of L phi + lambda1 phi = 0 and its eigenfunction,
/// normalised to max phi = 1, by shifted inverse iteration with a sparse LU.
/// Accepts a half-ball chart with totally geodesic face, or a sphere chart (cap).
EigenResult conformal_laplacian_eigen(const MetricField& g, const EigenOptions& options = {});

}  // namespace sigmak::geometry
