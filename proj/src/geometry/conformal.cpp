#include "sigmak/geometry/conformal.hpp"

#include <cmath>
#include <mutex>

#include "sigmak/geometry/pointwise.hpp"

namespace sigmak::geometry {

MetricField conformal_metric(const MetricField& g, const ScalarField& u) { return g.conformal(u); }

namespace {

template <int D>
Mat<D> transform_at(const MetricField& g, const ScalarField& u, std::size_t p, FieldClass cls, const Mat<D>& A,
                    const MetricJet<D>& jet) {
  const auto c = connection<D>(jet, false);
  const auto uj = scalar_jet<D>(g.grid(), u.values.data(), p, cls);
  const double grad2 = uj.d.dot(jet.gi * uj.d);
  return covariant_hessian<D>(uj, c.G) + uj.d * uj.d.transpose() - 0.5 * grad2 * jet.g + A;
}

}  // namespace

Tensor2Field schouten_transform(const MetricField& g, const ScalarField& u, const Tensor2Field& A, FieldClass cls,
                                Exec exec) {
  require(u.grid == g.grid() && A.grid == g.grid(), ErrorKind::argument, "fields live on different grids");
  Tensor2Field out(g.grid(), TensorRole::schouten);
  dispatch_dim(g.grid().dim(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    for_each_index(
        g.grid().size(),
        [&](std::size_t p) { out.put<D>(p, transform_at<D>(g, u, p, cls, A.at<D>(p), metric_jet<D>(g, p))); }, exec);
  });
  return out;
}

RoundTripError conformal_roundtrip_error(const MetricField& g, const ScalarField& u, Exec exec) {
  require(u.grid == g.grid(), ErrorKind::argument, "fields live on different grids");
  const MetricField gt = g.conformal(u);
  RoundTripError out;
  std::mutex mutex;
  dispatch_dim(g.grid().dim(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    const std::size_t count = g.grid().size();
    constexpr std::size_t block = 1024;
    for_each_index(
        (count + block - 1) / block,
        [&](std::size_t b) {
          RoundTripError local;
          for (std::size_t p = b * block; p < std::min(count, (b + 1) * block); ++p) {
            const auto jet = metric_jet<D>(g, p);
            const Mat<D> ric = ricci_from_jet<D>(jet);
            const Mat<D> A = modified_schouten_of<D>(ric, jet.gi.cwiseProduct(ric).sum(), jet.g, 1.0);
            const Mat<D> via_law = transform_at<D>(g, u, p, FieldClass::geometric, A, jet);
            const Mat<D> direct = modified_schouten_at<D>(gt, p, 1.0);
            const double err = (direct - via_law).cwiseAbs().maxCoeff();
            if (err > local.max_error) {
              local.max_error = err;
              local.worst_point = p;
            }
            local.max_reference = std::max(local.max_reference, direct.cwiseAbs().maxCoeff());
          }
          std::lock_guard<std::mutex> lock(mutex);
          if (local.max_error > out.max_error || (local.max_error == out.max_error && local.worst_point < out.worst_point)) {
            out.max_error = local.max_error;
            out.worst_point = local.worst_point;
          }
          out.max_reference = std::max(out.max_reference, local.max_reference);
        },
        exec);
  });
  return out;
}

}  // namespace sigmak::geometry
