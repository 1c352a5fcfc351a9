#include "sigmak/geometry/boundary.hpp"

#include <cmath>

#include "sigmak/common/errors.hpp"
#include "sigmak/common/parallel.hpp"
#include "sigmak/geometry/pointwise.hpp"

namespace sigmak::geometry {

namespace {

void require_half_ball(const ChartGrid& grid) {
  require(grid.kind() == ChartKind::half_ball_fermi, ErrorKind::chart,
          "boundary geometry needs a half_ball_fermi chart, got " + to_string(grid.kind()));
}

}  // namespace

SecondFundamentalForm second_fundamental_form(const MetricField& g, double tol) {
  const ChartGrid& grid = g.grid();
  require_half_ball(grid);
  const int n = grid.dim();
  const int m = n - 1;
  const auto pts = grid.boundary_face_points();
  SecondFundamentalForm out{
      BoundaryTensorField{grid, TensorRole::second_fundamental_form, m, pts,
                          std::vector<double>(pts.size() * static_cast<std::size_t>(packed_size(m)))},
      BoundaryScalarField{grid, ScalarRole::tau, pts, std::vector<double>(pts.size())}};
  std::vector<double> defect(pts.size()), maxg(pts.size()), maxl(pts.size());
  dispatch_dim(n, [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    for_each_index(pts.size(), [&](std::size_t k) {
      const auto jet = metric_jet<D>(g, pts[k]);
      const auto c = connection<D>(jet, false);
      const double norm = std::sqrt(jet.gi(D - 1, D - 1));
      const Eigen::Matrix<double, D - 1, D - 1> L = c.G[D - 1].template topLeftCorner<D - 1, D - 1>() / norm;
      const Eigen::Matrix<double, D - 1, D - 1> gT = jet.g.template topLeftCorner<D - 1, D - 1>();
      const double tau = (gT.inverse() * L).trace() / (D - 1);
      double* v = out.L.values.data() + k * static_cast<std::size_t>(packed_size(D - 1));
      int q = 0;
      for (int i = 0; i < D - 1; ++i)
        for (int j = i; j < D - 1; ++j) v[q++] = 0.5 * (L(i, j) + L(j, i));
      out.tau.values[k] = tau;
      defect[k] = (L - tau * gT).cwiseAbs().maxCoeff();
      maxg[k] = jet.g.cwiseAbs().maxCoeff();
      maxl[k] = L.cwiseAbs().maxCoeff();
    });
  });
  for (std::size_t k = 0; k < pts.size(); ++k) {
    out.umbilic_defect = std::max(out.umbilic_defect, defect[k]);
    out.max_g = std::max(out.max_g, maxg[k]);
    out.max_L = std::max(out.max_L, maxl[k]);
  }
  out.totally_geodesic = out.max_L <= tol * out.max_g;
  out.umbilic = out.umbilic_defect <= tol * out.max_g;
  return out;
}

double normal_derivative(const ScalarField& u, const MetricField& g, std::size_t face_point) {
  const ChartGrid& grid = g.grid();
  require_half_ball(grid);
  require(u.grid == grid, ErrorKind::argument, "u lives on a different grid");
  require(grid.on_boundary_face(face_point), ErrorKind::argument, "point is not on the boundary face");
  const int n = grid.dim();
  const Multi m = grid.multi(face_point);
  const Eigen::MatrixXd gi = g.matrix(face_point).inverse();
  double un = 0.0;
  for (int j = 0; j < n; ++j) {
    const double dj = j == n - 1 ? forward_first_derivative(grid, m, j).apply(u.values.data())
                                 : first_derivative(grid, m, j, FieldClass::geometric).apply(u.values.data());
    un += gi(n - 1, j) * dj;
  }
  return un / std::sqrt(gi(n - 1, n - 1));
}

BoundaryScalarField boundary_condition_residual(const ScalarField& u, const MetricField& g, double tau_tilde,
                                                double tol) {
  const auto form = second_fundamental_form(g, tol);
  if (!form.umbilic)
    fail(ErrorKind::umbilicity, "boundary is not umbilic (defect " + std::to_string(form.umbilic_defect) + ")");
  BoundaryScalarField out{g.grid(), ScalarRole::residual, form.tau.points, std::vector<double>(form.tau.points.size())};
  for_each_index(out.points.size(), [&](std::size_t k) {
    const std::size_t p = out.points[k];
    out.values[k] = normal_derivative(u, g, p) - (tau_tilde * std::exp(-u.values[p]) - form.tau.values[k]);
  });
  return out;
}

}  // namespace sigmak::geometry
