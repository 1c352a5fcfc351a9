#include "sigmak/geometry/curvature.hpp"

#include "sigmak/geometry/pointwise.hpp"

namespace sigmak::geometry {

ChristoffelField christoffel(const MetricField& g, Exec exec) {
  const int n = g.grid().dim();
  ChristoffelField out{g.grid(), n, std::vector<double>(g.grid().size() * static_cast<std::size_t>(n * n * n))};
  dispatch_dim(n, [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    for_each_index(
        g.grid().size(),
        [&](std::size_t p) {
          const auto c = connection<D>(metric_jet<D>(g, p), false);
          double* v = out.values.data() + p * static_cast<std::size_t>(D * D * D);
          for (int k = 0; k < D; ++k)
            for (int i = 0; i < D; ++i)
              for (int j = 0; j < D; ++j) *v++ = c.G[static_cast<std::size_t>(k)](i, j);
        },
        exec);
  });
  return out;
}

CurvatureFields curvature(const MetricField& g, Exec exec) {
  const int n = g.grid().dim();
  const std::size_t n4 = static_cast<std::size_t>(n * n * n * n);
  CurvatureFields out{RiemannField{g.grid(), n, std::vector<double>(g.grid().size() * n4)},
                      Tensor2Field(g.grid(), TensorRole::ricci), ScalarField(g.grid(), ScalarRole::R_scalar)};
  dispatch_dim(n, [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    for_each_index(
        g.grid().size(),
        [&](std::size_t p) {
          const auto jet = metric_jet<D>(g, p);
          const auto c = connection<D>(jet, true);
          double* v = out.riemann.values.data() + p * n4;
          for (int r = 0; r < D; ++r)
            for (int s = 0; s < D; ++s)
              for (int m = 0; m < D; ++m)
                for (int w = 0; w < D; ++w) *v++ = riemann_component<D>(c, r, s, m, w);
          const Mat<D> ric = ricci_tensor<D>(c);
          out.ricci.put<D>(p, ric);
          out.R.values[p] = jet.gi.cwiseProduct(ric).sum();
        },
        exec);
  });
  return out;
}

RicciFields ricci(const MetricField& g, Exec exec) {
  RicciFields out{Tensor2Field(g.grid(), TensorRole::ricci), ScalarField(g.grid(), ScalarRole::R_scalar)};
  dispatch_dim(g.grid().dim(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    for_each_index(
        g.grid().size(),
        [&](std::size_t p) {
          const auto jet = metric_jet<D>(g, p);
          const Mat<D> ric = ricci_from_jet<D>(jet);
          out.ricci.put<D>(p, ric);
          out.R.values[p] = jet.gi.cwiseProduct(ric).sum();
        },
        exec);
  });
  return out;
}

Tensor2Field modified_schouten_from(const RicciFields& rc, const MetricField& g, double t, Exec exec) {
  require(rc.ricci.grid == g.grid(), ErrorKind::argument, "Ricci field lives on a different grid");
  Tensor2Field out(g.grid(), t == 1.0 ? TensorRole::schouten : TensorRole::modified_schouten);
  dispatch_dim(g.grid().dim(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    for_each_index(
        g.grid().size(),
        [&](std::size_t p) {
          out.put<D>(p, modified_schouten_of<D>(rc.ricci.at<D>(p), rc.R.values[p], g.at<D>(p), t));
        },
        exec);
  });
  return out;
}

Tensor2Field modified_schouten(const MetricField& g, double t, Exec exec) {
  return modified_schouten_from(ricci(g, exec), g, t, exec);
}

Tensor2Field schouten(const MetricField& g, Exec exec) { return modified_schouten(g, 1.0, exec); }

}  // namespace sigmak::geometry
