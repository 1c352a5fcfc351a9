#include "sigmak/solver/jacobian.hpp"

#include "sigmak/common/errors.hpp"
#include "sigmak/geometry/stencil.hpp"

namespace sigmak::solver {

using geometry::FieldClass;
using geometry::Mat;
using geometry::Vec;

UnknownMap make_unknowns(const geometry::ChartGrid& grid, long pin) {
  UnknownMap m;
  m.slot.assign(grid.size(), -1);
  m.pinned = pin;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (grid.is_dirichlet(p) || static_cast<long>(p) == pin) continue;
    m.slot[p] = static_cast<int>(m.points.size());
    m.points.push_back(p);
  }
  return m;
}

NewtonSystem assemble_system(const geometry::ScalarField& u, const equation::GeometryCache& geo,
                             const equation::ProblemSpec& spec, const UnknownMap& unknowns, Exec exec) {
  const auto& grid = geo.grid();
  require(u.grid == grid, ErrorKind::argument, "u lives on a different grid");
  const std::size_t m = unknowns.size();
  using Triplet = Eigen::Triplet<double, int>;
  std::vector<std::vector<Triplet>> rows(m);
  NewtonSystem out{Eigen::SparseMatrix<double>(static_cast<int>(m), static_cast<int>(m)), Eigen::VectorXd(m)};
  std::vector<long> bad(m, -1);
  geometry::dispatch_dim(geo.n(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    for_each_index(
        m,
        [&](std::size_t k) {
          const std::size_t p = unknowns.points[k];
          const auto pt = equation::point_tensor<D>(spec, geo, u.values.data(), p, FieldClass::solution);
          const auto sp = equation::point_spectrum<D>(spec.op, pt.T, geo.Linv<D>(p), true);
          if (!sp.admissible) {
            bad[k] = static_cast<long>(p);
            return;
          }
          double fz = 0.0;
          out.r(static_cast<Eigen::Index>(k)) = sp.F - equation::rhs_value(spec.rhs, spec.rhs.psi.at(p), u.values[p], &fz);

          const double s = spec.sign();
          const Mat<D> g = geo.g<D>(p);
          const Mat<D> gi = geo.gi<D>(p);
          const double sumF = sp.Fij.cwiseProduct(g).sum();
          const Mat<D> A = s * (sp.Fij + spec.trace_coefficient() * sumF * gi);
          const auto G = geo.G<D>(p);
          Vec<D> B = s * (2.0 * spec.a.at(p) * (sp.Fij * pt.du) + 2.0 * spec.b.at(p) * sumF * (gi * pt.du));
          for (int q = 0; q < D; ++q) B(q) -= A.cwiseProduct(G[static_cast<std::size_t>(q)]).sum();

          std::vector<Triplet>& out_row = rows[k];
          const auto mi = grid.multi(p);
          auto emit = [&](const geometry::Stencil& st, double c) {
            if (c == 0.0) return;
            for (const auto& t : st) {
              const int col = unknowns.slot[t.index];
              if (col >= 0) out_row.emplace_back(static_cast<int>(k), col, c * t.weight);
            }
          };
          for (int a = 0; a < D; ++a) {
            emit(geometry::second_derivative(grid, mi, a, FieldClass::solution), A(a, a));
            emit(geometry::first_derivative(grid, mi, a, FieldClass::solution), B(a));
            for (int b = a + 1; b < D; ++b) emit(geometry::mixed_derivative(grid, mi, a, b, FieldClass::solution), 2.0 * A(a, b));
          }
          out_row.emplace_back(static_cast<int>(k), static_cast<int>(k), -fz);
        },
        exec);
  });
  for (long p : bad)
    if (p >= 0) fail(ErrorKind::admissibility, "Jacobian requested at inadmissible point " + std::to_string(p));
  std::size_t nnz = 0;
  for (const auto& r : rows) nnz += r.size();
  std::vector<Triplet> all;
  all.reserve(nnz);
  for (const auto& r : rows) all.insert(all.end(), r.begin(), r.end());
  out.J.setFromTriplets(all.begin(), all.end());
  out.J.makeCompressed();
  return out;
}

}  // namespace sigmak::solver
