#include "sigmak/estimates/quantities.hpp"

#include "sigmak/common/errors.hpp"

namespace sigmak::estimates {

using geometry::Mat;
using geometry::ScalarField;
using geometry::ScalarRole;

DerivativeFields derivative_fields(const ScalarField& u, const equation::GeometryCache& geo, Exec exec) {
  const auto& grid = geo.grid();
  require(u.grid == grid, ErrorKind::argument, "u lives on a different grid than the metric");
  DerivativeFields out{ScalarField(grid, ScalarRole::generic, 0.0), ScalarField(grid, ScalarRole::generic, 0.0),
                       ScalarField(grid, ScalarRole::generic, 0.0)};
  geometry::dispatch_dim(geo.n(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    for_each_index(
        grid.size(),
        [&](std::size_t p) {
          const auto jet = geometry::scalar_jet<D>(grid, u.values.data(), p, geometry::FieldClass::solution);
          const Mat<D> gi = geo.gi<D>(p);
          const Mat<D> H = geometry::covariant_hessian<D>(jet, geo.G<D>(p));
          out.grad_sq.values[p] = jet.d.dot(gi * jet.d);
          out.lap.values[p] = gi.cwiseProduct(H).sum();
          out.hess_norm.values[p] = std::sqrt(std::max(0.0, (gi * H * gi).cwiseProduct(H).sum()));
        },
        exec);
  });
  return out;
}

ScalarField compute_K(const DerivativeFields& d, const equation::ScalarParameter& a) {
  ScalarField K(d.lap.grid, ScalarRole::K, 0.0);
  if (a.field) require(a.field->grid == d.lap.grid, ErrorKind::argument, "a lives on a different grid");
  for (std::size_t p = 0; p < K.size(); ++p) K.values[p] = d.lap.values[p] + a.at(p) * d.grad_sq.values[p];
  return K;
}

ScalarField compute_K(const ScalarField& u, const geometry::MetricField& g, const equation::ScalarParameter& a, Exec exec) {
  return compute_K(derivative_fields(u, equation::GeometryCache(g, exec), exec), a);
}

}  // namespace sigmak::estimates
