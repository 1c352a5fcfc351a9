#include "sigmak/geometry/eigen_problem.hpp"

#include <cmath>
#include <numeric>

#include "sigmak/common/errors.hpp"
#include "sigmak/common/parallel.hpp"
#include "sigmak/geometry/boundary.hpp"
#include "sigmak/geometry/curvature.hpp"
#include "sigmak/geometry/pointwise.hpp"
#include "sigmak/geometry/sparse_solver.hpp"

namespace sigmak::geometry {

Eigen::SparseMatrix<double> conformal_laplacian_matrix(const MetricField& g, double shift) {
  const ChartGrid& grid = g.grid();
  const int n = grid.dim();
  const double cn = (n - 2.0) / (4.0 * (n - 1.0));
  const ScalarField R = ricci(g).R;
  using Triplet = Eigen::Triplet<double, int>;
  std::vector<std::vector<Triplet>> rows(grid.size());
  dispatch_dim(n, [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    for_each_index(grid.size(), [&](std::size_t p) {
      const auto jet = metric_jet<D>(g, p);
      const auto c = connection<D>(jet, false);
      const Multi m = grid.multi(p);
      auto& row = rows[p];
      const int r = static_cast<int>(p);
      row.emplace_back(r, r, cn * R.values[p] + shift);
      for (int a = 0; a < D; ++a) {
        double drift = 0.0;  // g^{ij} Gamma^a_ij
        for (int i = 0; i < D; ++i)
          for (int j = 0; j < D; ++j) drift += jet.gi(i, j) * c.G[static_cast<std::size_t>(a)](i, j);
        for (const auto& t : first_derivative(grid, m, a, FieldClass::neumann))
          row.emplace_back(r, static_cast<int>(t.index), drift * t.weight);
        for (const auto& t : second_derivative(grid, m, a, FieldClass::neumann))
          row.emplace_back(r, static_cast<int>(t.index), -jet.gi(a, a) * t.weight);
        for (int b = a + 1; b < D; ++b)
          for (const auto& t : mixed_derivative(grid, m, a, b, FieldClass::neumann))
            row.emplace_back(r, static_cast<int>(t.index), -2.0 * jet.gi(a, b) * t.weight);
      }
    });
  });
  std::vector<Triplet> all;
  for (auto& row : rows) all.insert(all.end(), row.begin(), row.end());
  Eigen::SparseMatrix<double> M(static_cast<int>(grid.size()), static_cast<int>(grid.size()));
  M.setFromTriplets(all.begin(), all.end());
  M.makeCompressed();
  return M;
}

EigenResult conformal_laplacian_eigen(const MetricField& g, const EigenOptions& options) {
  const ChartGrid& grid = g.grid();
  if (grid.kind() == ChartKind::half_ball_fermi) {
    const auto form = second_fundamental_form(g, options.geodesic_tolerance);
    require(form.totally_geodesic, ErrorKind::precondition,
            "eigenproblem needs a totally geodesic boundary face (max|L| = " + std::to_string(form.max_L) + ")");
  } else {
    require(grid.kind() == ChartKind::sphere_chart, ErrorKind::chart,
            "eigenproblem needs a half_ball_fermi or sphere_chart chart");
  }
  const Eigen::SparseMatrix<double> M = conformal_laplacian_matrix(g, options.shift);
  const int N = static_cast<int>(M.rows());

  // Shift below the diagonal potential so the smallest eigenvalue dominates the inverse iteration.
  double sigma = std::numeric_limits<double>::infinity();
  for (int i = 0; i < N; ++i) {
    double diag = M.coeff(i, i), off = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, i); it; ++it)
      if (it.row() != i) off += it.value();
    sigma = std::min(sigma, diag + off);  // row sum, i.e. the potential plus drift-free constant part
  }
  sigma -= 1.0;
  Eigen::SparseMatrix<double> shifted = M;
  for (int i = 0; i < N; ++i) shifted.coeffRef(i, i) -= sigma;

  std::vector<std::size_t> all(grid.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  SparseDirectSolver lu(grid, all);
  lu.factorize(shifted);

  Eigen::VectorXd x = Eigen::VectorXd::Ones(N);
  double mu = 0.0, prev = std::numeric_limits<double>::quiet_NaN();
  EigenResult out{0.0, ScalarField(grid, ScalarRole::generic), 0, 0.0};
  bool converged = false;
  for (int it = 1; it <= options.max_iterations; ++it) {
    x /= x.norm();
    const Eigen::VectorXd y = lu.solve(x);
    mu = sigma + x.squaredNorm() / x.dot(y);
    x = y;
    out.iterations = it;
    if (std::isfinite(prev) && std::abs(mu - prev) <= options.tolerance * std::max(1.0, std::abs(mu))) {
      converged = true;
      break;
    }
    prev = mu;
  }
  if (!converged) fail(ErrorKind::numerical, "inverse iteration did not converge");
  if (x.sum() < 0.0) x = -x;
  x /= x.maxCoeff();
  out.lambda1 = mu;
  out.residual = (M * x - mu * x).cwiseAbs().maxCoeff();
  for (int i = 0; i < N; ++i) {
    require(x(i) > 0.0, ErrorKind::numerical, "first eigenfunction is not positive at point " + std::to_string(i));
    out.phi.values[static_cast<std::size_t>(i)] = x(i);
  }
  return out;
}

}  // namespace sigmak::geometry
