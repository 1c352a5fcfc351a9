#include "sigmak/estimates/functionals.hpp"

#include <cmath>

#include "sigmak/common/errors.hpp"
#include "sigmak/geometry/boundary.hpp"
#include "sigmak/geometry/curvature.hpp"
#include "sigmak/geometry/stencil.hpp"
#include "sigmak/symfunc/elementary.hpp"

namespace sigmak::estimates {

using geometry::ChartGrid;
using geometry::ChartKind;
using geometry::ScalarField;

namespace {

double axis_weight(const ChartGrid& grid, const geometry::Multi& m, int a) {
  if (grid.periodic(a)) return 1.0;
  const int i = m[static_cast<std::size_t>(a)];
  return (i == 0 || i == grid.extent(a) - 1) ? 0.5 : 1.0;
}

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

double double_factorial(int m) {
  double f = 1.0;
  for (int i = m; i > 1; i -= 2) f *= i;
  return f;
}

}  // namespace

std::vector<double> quadrature_weights(const ChartGrid& grid) {
  const int n = grid.dim();
  const double hn = std::pow(grid.h(), n);
  std::vector<double> w(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto m = grid.multi(p);
    double v = hn;
    for (int a = 0; a < n; ++a) v *= axis_weight(grid, m, a);
    w[p] = v;
  }
  return w;
}

std::vector<double> face_quadrature_weights(const ChartGrid& grid) {
  require(grid.has_boundary_face(), ErrorKind::chart, "face quadrature needs a half-ball chart");
  const int n = grid.dim();
  const double hn = std::pow(grid.h(), n - 1);
  const auto pts = grid.boundary_face_points();
  std::vector<double> w(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto m = grid.multi(pts[k]);
    double v = hn;
    for (int a = 0; a < n - 1; ++a) v *= axis_weight(grid, m, a);
    w[k] = v;
  }
  return w;
}

YamabeValue yamabe_functional(const ScalarField& u, const geometry::MetricField& g, Exec exec) {
  const auto& grid = g.grid();
  require(u.grid == grid, ErrorKind::argument, "u lives on a different grid than the metric");
  const int n = grid.dim();
  const double q = 2.0 * n / (n - 2.0);
  const auto w = quadrature_weights(grid);
  std::vector<double> vol(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) vol[p] = w[p] * std::sqrt(g.matrix(p).determinant());

  double norm = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) norm += vol[p] * std::pow(std::abs(u.values[p]), q);
  require(norm > 0.0 && std::isfinite(norm), ErrorKind::normalization, "u vanishes identically; cannot normalise");
  YamabeValue out;
  out.normalisation = std::pow(norm, -1.0 / q);
  const double s = out.normalisation;

  const auto R = geometry::ricci(g, exec).R;
  std::vector<double> grad(grid.size()), curv(grid.size());
  for_each_index(
      grid.size(),
      [&](std::size_t p) {
        const auto m = grid.multi(p);
        Eigen::VectorXd d(n);
        for (int a = 0; a < n; ++a)
          d(a) = s * geometry::first_derivative(grid, m, a, geometry::FieldClass::geometric).apply(u.values.data());
        const double up = s * u.values[p];
        grad[p] = vol[p] * d.dot(g.matrix(p).inverse() * d);
        curv[p] = vol[p] * R.values[p] * up * up;
      },
      exec);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    out.gradient_term += grad[p];
    out.curvature_term += curv[p];
  }
  out.curvature_term *= (n - 2.0) / (4.0 * (n - 1.0));

  if (grid.has_boundary_face()) {
    const auto sff = geometry::second_fundamental_form(g);
    const auto fw = face_quadrature_weights(grid);
    const auto& pts = sff.tau.points;
    double b = 0.0;
    for (std::size_t k = 0; k < pts.size() && !sff.totally_geodesic; ++k) {
      const double up = s * u.values[pts[k]];
      const Eigen::MatrixXd gT = g.matrix(pts[k]).topLeftCorner(n - 1, n - 1);
      b += fw[k] * std::sqrt(gT.determinant()) * sff.tau.values[k] * up * up;
    }
    out.boundary_term = 0.5 * (n - 2.0) * b;
  }
  out.value = out.gradient_term + out.curvature_term + out.boundary_term;
  return out;
}

double bk_coefficient(int n, int k, int i) {
  require(0 <= i && i < k && k <= n, ErrorKind::argument, "bk_coefficient needs 0 <= i < k <= n");
  return factorial(n - i - 1) / (factorial(n - k) * double_factorial(2 * k - 2 * i - 1));
}

geometry::BoundaryScalarField boundary_curvature_Bk(const geometry::MetricField& g, int k, Exec exec) {
  const auto& grid = g.grid();
  require(grid.kind() == ChartKind::half_ball_fermi, ErrorKind::chart, "boundary curvature needs a half-ball chart");
  const int n = grid.dim();
  require(1 <= k && k <= n, ErrorKind::argument, "boundary curvature needs 1 <= k <= n");
  const auto sff = geometry::second_fundamental_form(g);
  require(sff.umbilic, ErrorKind::umbilicity,
          "boundary is not umbilic (defect " + std::to_string(sff.umbilic_defect) + ")");
  geometry::BoundaryScalarField out{grid, geometry::ScalarRole::generic, sff.tau.points,
                                    std::vector<double>(sff.tau.points.size(), 0.0)};
  if (sff.totally_geodesic) return out;
  const auto A = geometry::schouten(g, exec);
  for (std::size_t j = 0; j < out.points.size(); ++j) {
    const std::size_t p = out.points[j];
    const Eigen::MatrixXd gT = g.matrix(p).topLeftCorner(n - 1, n - 1);
    const Eigen::MatrixXd AT = A.matrix(p).topLeftCorner(n - 1, n - 1);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(AT, gT, Eigen::EigenvaluesOnly);
    std::vector<double> lam(es.eigenvalues().data(), es.eigenvalues().data() + n - 1);
    const double tau = sff.tau.values[j];
    double v = 0.0;
    for (int i = 0; i < k; ++i) v += bk_coefficient(n, k, i) * symfunc::sigma(lam, i) * std::pow(tau, 2 * k - 2 * i - 1);
    out.values[j] = v;
  }
  return out;
}

FkValue F_k_functional(const geometry::MetricField& g, int k, Exec exec) {
  const auto& grid = g.grid();
  const int n = grid.dim();
  require(1 <= k && k <= n, ErrorKind::argument, "F_k needs 1 <= k <= n");
  const auto A = geometry::schouten(g, exec);
  const auto w = quadrature_weights(grid);
  std::vector<double> integrand(grid.size());
  for_each_index(
      grid.size(),
      [&](std::size_t p) {
        const Eigen::MatrixXd gp = g.matrix(p);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A.matrix(p), gp, Eigen::EigenvaluesOnly);
        std::vector<double> lam(es.eigenvalues().data(), es.eigenvalues().data() + n);
        integrand[p] = w[p] * std::sqrt(gp.determinant()) * symfunc::sigma(lam, k);
      },
      exec);
  FkValue out;
  for (double v : integrand) out.interior += v;
  if (grid.has_boundary_face()) {
    const auto B = boundary_curvature_Bk(g, k, exec);
    const auto fw = face_quadrature_weights(grid);
    for (std::size_t j = 0; j < B.points.size(); ++j) {
      const Eigen::MatrixXd gT = g.matrix(B.points[j]).topLeftCorner(n - 1, n - 1);
      out.boundary += fw[j] * std::sqrt(gT.determinant()) * B.values[j];
    }
  }
  out.value = out.interior + out.boundary;
  return out;
}

}  // namespace sigmak::estimates
