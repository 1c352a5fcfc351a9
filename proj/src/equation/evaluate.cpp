#include "sigmak/equation/evaluate.hpp"

#include <algorithm>

#include "sigmak/common/errors.hpp"

namespace sigmak::equation {

using geometry::FieldClass;
using geometry::Mat;
using geometry::MetricField;
using geometry::ScalarField;
using geometry::Tensor2Field;

GeometryCache::GeometryCache(const MetricField& g, Exec exec) : grid_(g.grid()), n_(g.grid().dim()) {
  const std::size_t N = grid_.size();
  const auto nn = static_cast<std::size_t>(n_ * n_);
  g_.resize(N * nn);
  gi_.resize(N * nn);
  linv_.resize(N * nn);
  gamma_.resize(N * nn * static_cast<std::size_t>(n_));
  geometry::dispatch_dim(n_, [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    for_each_index(
        N,
        [&](std::size_t p) {
          const auto jet = geometry::metric_jet<D>(g, p);
          const auto c = geometry::connection<D>(jet, false);
          Eigen::Map<Mat<D>>(g_.data() + p * nn) = jet.g;
          Eigen::Map<Mat<D>>(gi_.data() + p * nn) = jet.gi;
          const Mat<D> L = jet.g.llt().matrixL();
          Eigen::Map<Mat<D>>(linv_.data() + p * nn) =
              L.template triangularView<Eigen::Lower>().solve(Mat<D>::Identity());
          for (int k = 0; k < D; ++k)
            Eigen::Map<Mat<D>>(gamma_.data() + (p * D + static_cast<std::size_t>(k)) * nn) = c.G[static_cast<std::size_t>(k)];
        },
        exec);
  });
}

namespace {

void check_inputs(const ScalarField& u, const geometry::ChartGrid& grid, const ProblemSpec& spec) {
  require(u.grid == grid, ErrorKind::argument, "u lives on a different grid than the metric");
  validate_problem(spec, grid);
}

}  // namespace

Tensor2Field assemble_tensor(const ScalarField& u, const GeometryCache& geo, const ProblemSpec& spec, Exec exec) {
  check_inputs(u, geo.grid(), spec);
  Tensor2Field out(geo.grid(), spec.branch == Branch::W ? geometry::TensorRole::W : geometry::TensorRole::V);
  geometry::dispatch_dim(geo.n(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    for_each_index(
        geo.grid().size(),
        [&](std::size_t p) { out.put<D>(p, point_tensor<D>(spec, geo, u.values.data(), p, FieldClass::solution).T); },
        exec);
  });
  return out;
}

Tensor2Field assemble_W(const ScalarField& u, const MetricField& g, const ProblemSpec& spec, Exec exec) {
  require(spec.branch == Branch::W, ErrorKind::argument, "assemble_W needs a W branch problem");
  return assemble_tensor(u, GeometryCache(g, exec), spec, exec);
}

Tensor2Field assemble_V(const ScalarField& u, const MetricField& g, const ProblemSpec& spec, Exec exec) {
  require(spec.branch == Branch::V, ErrorKind::argument, "assemble_V needs a V branch problem");
  return assemble_tensor(u, GeometryCache(g, exec), spec, exec);
}

EquationEvaluation evaluate_equation(const ScalarField& u, const GeometryCache& geo, const ProblemSpec& spec,
                                     bool skip_dirichlet, Exec exec) {
  check_inputs(u, geo.grid(), spec);
  const auto& grid = geo.grid();
  EquationEvaluation out{ScalarField(grid, geometry::ScalarRole::residual, 0.0),
                         ScalarField(grid, geometry::ScalarRole::generic, 0.0),
                         std::vector<std::uint8_t>(grid.size(), 0)};
  geometry::dispatch_dim(geo.n(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    for_each_index(
        grid.size(),
        [&](std::size_t p) {
          const auto pt = point_tensor<D>(spec, geo, u.values.data(), p, FieldClass::solution);
          const auto sp = point_spectrum<D>(spec.op, pt.T, geo.Linv<D>(p), false);
          out.cone_distance.values[p] = sp.cone_distance;
          out.admissible[p] = sp.admissible ? 1 : 0;
          if (skip_dirichlet && grid.is_dirichlet(p)) {
            out.residual.values[p] = 0.0;
            return;
          }
          double fz = 0.0;
          out.residual.values[p] =
              sp.admissible ? sp.F - rhs_value(spec.rhs, spec.rhs.psi.at(p), u.values[p], &fz)
                            : std::numeric_limits<double>::quiet_NaN();
        },
        exec);
  });
  out.max_residual = 0.0;
  out.min_cone_distance = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < grid.size(); ++p) {
    out.min_cone_distance = std::min(out.min_cone_distance, out.cone_distance.values[p]);
    if (!out.admissible[p]) {
      ++out.inadmissible_count;
      continue;
    }
    out.max_residual = std::max(out.max_residual, std::abs(out.residual.values[p]));
  }
  return out;
}

EquationEvaluation evaluate_equation(const ScalarField& u, const MetricField& g, const ProblemSpec& spec, Exec exec) {
  return evaluate_equation(u, GeometryCache(g, exec), spec, false, exec);
}

LinearizedCoefficients linearize(const ScalarField& u, const MetricField& g, const ProblemSpec& spec, Exec exec) {
  const GeometryCache geo(g, exec);
  check_inputs(u, geo.grid(), spec);
  const auto& grid = geo.grid();
  LinearizedCoefficients out{spec.branch, Tensor2Field(grid), Tensor2Field(grid),
                             ScalarField(grid, geometry::ScalarRole::generic, 0.0)};
  std::vector<double> minF(grid.size()), minPQ(grid.size());
  std::vector<std::uint8_t> bad(grid.size(), 0);
  geometry::dispatch_dim(geo.n(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    for_each_index(
        grid.size(),
        [&](std::size_t p) {
          const auto pt = point_tensor<D>(spec, geo, u.values.data(), p, FieldClass::solution);
          const auto sp = point_spectrum<D>(spec.op, pt.T, geo.Linv<D>(p), true);
          if (!sp.admissible) {
            bad[p] = 1;
            return;
          }
          const Mat<D> gm = geo.g<D>(p);
          const double sumF = sp.Fij.cwiseProduct(gm).sum();
          const Mat<D> P = sp.Fij + spec.trace_coefficient() * sumF * geo.gi<D>(p);
          const Mat<D> PQ = spec.branch == Branch::W ? P : Mat<D>(-P);
          out.F.put<D>(p, sp.Fij);
          out.PQ.put<D>(p, PQ);
          out.sumF.values[p] = sumF;
          // Eigenvalues relative to g: those of L^T X L with g = L L^T.
          const Mat<D> L = gm.llt().matrixL();
          Eigen::SelfAdjointEigenSolver<Mat<D>> ef(L.transpose() * sp.Fij * L, Eigen::EigenvaluesOnly);
          Eigen::SelfAdjointEigenSolver<Mat<D>> ep(L.transpose() * PQ * L, Eigen::EigenvaluesOnly);
          minF[p] = ef.eigenvalues()(0);
          minPQ[p] = ep.eigenvalues()(0);
        },
        exec);
  });
  for (std::size_t p = 0; p < grid.size(); ++p)
    if (bad[p]) fail(ErrorKind::admissibility, "linearize: inadmissible state at point " + std::to_string(p));
  out.min_F_eigenvalue = *std::min_element(minF.begin(), minF.end());
  out.min_PQ_eigenvalue = *std::min_element(minPQ.begin(), minPQ.end());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (minF[p] <= 0.0) ++out.F_violations;
    if (minPQ[p] <= 0.0) ++out.PQ_violations;
  }
  out.F.role = geometry::TensorRole::generic;
  return out;
}

}  // namespace sigmak::equation
