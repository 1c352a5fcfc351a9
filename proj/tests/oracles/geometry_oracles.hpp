#pragma once

// Closed forms for conformally flat metrics e^{2w} delta, and a dense eigen solve.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <limits>

namespace oracle {

// w = log(2 / (1 + |x|^2)) for the stereographic round sphere.
struct SphereFactor {
  int n;
  double w(const double* x) const {
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) r2 += x[i] * x[i];
    return std::log(2.0 / (1.0 + r2));
  }
  double dw(const double* x, int i) const {
    double r2 = 0.0;
    for (int j = 0; j < n; ++j) r2 += x[j] * x[j];
    return -2.0 * x[i] / (1.0 + r2);
  }
};

inline double conformally_flat_christoffel(const SphereFactor& f, const double* x, int k, int i, int j) {
  return (k == i ? f.dw(x, j) : 0.0) + (k == j ? f.dw(x, i) : 0.0) - (i == j ? f.dw(x, k) : 0.0);
}

// Smallest real part among the eigenvalues of a small sparse matrix.
inline double smallest_eigenvalue_dense(const Eigen::SparseMatrix<double>& M) {
  const Eigen::MatrixXd dense(M);
  Eigen::EigenSolver<Eigen::MatrixXd> es(dense, false);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < es.eigenvalues().size(); ++i) best = std::min(best, es.eigenvalues()[i].real());
  return best;
}

}  // namespace oracle
