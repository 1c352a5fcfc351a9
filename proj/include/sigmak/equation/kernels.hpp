#pragma once

// Per-point building blocks shared by evaluation, linearisation and the Jacobian.

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "sigmak/common/parallel.hpp"
#include "sigmak/equation/problem.hpp"
#include "sigmak/geometry/pointwise.hpp"

namespace sigmak::equation {

/// g, g^{-1}, the Cholesky factor inverse and Gamma at every point, computed once per metric.
class GeometryCache {
 public:
  explicit GeometryCache(const geometry::MetricField& g, Exec exec = default_exec());

  const geometry::ChartGrid& grid() const { return grid_; }
  int n() const { return n_; }

  template <int D>
  geometry::Mat<D> g(std::size_t p) const { return load<D>(g_, p); }
  template <int D>
  geometry::Mat<D> gi(std::size_t p) const { return load<D>(gi_, p); }
  template <int D>
  geometry::Mat<D> Linv(std::size_t p) const { return load<D>(linv_, p); }
  template <int D>
  geometry::Tensor3<D> G(std::size_t p) const {
    geometry::Tensor3<D> out;
    const double* v = gamma_.data() + p * static_cast<std::size_t>(D * D * D);
    for (int k = 0; k < D; ++k) out[static_cast<std::size_t>(k)] = Eigen::Map<const geometry::Mat<D>>(v + k * D * D);
    return out;
  }

 private:
  template <int D>
  geometry::Mat<D> load(const std::vector<double>& store, std::size_t p) const {
    return Eigen::Map<const geometry::Mat<D>>(store.data() + p * static_cast<std::size_t>(D * D));
  }
  geometry::ChartGrid grid_;
  int n_;
  std::vector<double> g_, gi_, linv_, gamma_;
};

template <int D>
struct PointTensor {
  geometry::Mat<D> T;     // W or V
  geometry::Vec<D> du;    // coordinate gradient
  geometry::Mat<D> hess;  // covariant Hessian
  double lap = 0.0;
  double grad2 = 0.0;
};

/// T = s Phi(u) + S at point p; u differentiated with `cls`.
template <int D>
PointTensor<D> point_tensor(const ProblemSpec& spec, const GeometryCache& geo, const double* u, std::size_t p,
                            geometry::FieldClass cls) {
  const auto jet = geometry::scalar_jet<D>(geo.grid(), u, p, cls);
  const auto g = geo.g<D>(p);
  const auto gi = geo.gi<D>(p);
  PointTensor<D> out;
  out.du = jet.d;
  out.hess = geometry::covariant_hessian<D>(jet, geo.G<D>(p));
  out.lap = gi.cwiseProduct(out.hess).sum();
  out.grad2 = jet.d.dot(gi * jet.d);
  const double s = spec.sign();
  geometry::Mat<D> phi = out.hess + (spec.trace_coefficient() * out.lap + spec.b.at(p) * out.grad2) * g +
                         spec.a.at(p) * (jet.d * jet.d.transpose());
  out.T = s * phi + spec.S.at<D>(p);
  return out;
}

template <int D>
struct PointSpectrum {
  bool admissible = false;
  double F = std::numeric_limits<double>::quiet_NaN();
  double cone_distance = -std::numeric_limits<double>::infinity();
  geometry::Vec<D> lambda;
  geometry::Mat<D> Fij;  // dF/dT_ij, filled when requested and admissible
};

template <int D>
PointSpectrum<D> point_spectrum(const symfunc::OperatorSpec& op, const geometry::Mat<D>& T, const geometry::Mat<D>& Linv,
                                bool with_gradient) {
  PointSpectrum<D> out;
  geometry::Mat<D> M = Linv * T * Linv.transpose();
  M = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<geometry::Mat<D>> es(M, with_gradient ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  out.lambda = es.eigenvalues();
  const std::span<const double> lam(out.lambda.data(), D);
  out.cone_distance = symfunc::cone_distance(lam, op.cone());
  out.admissible = symfunc::in_cone(lam, op.cone());
  if (!out.admissible) return out;
  if (!with_gradient) {
    out.F = symfunc::evaluate_F(op, lam);
    return out;
  }
  std::array<double, D> grad{};
  out.F = symfunc::F_value_gradient(op, lam, grad);
  const geometry::Mat<D> B = Linv.transpose() * es.eigenvectors();
  geometry::Vec<D> f = Eigen::Map<const geometry::Vec<D>>(grad.data());
  out.Fij = B * f.asDiagonal() * B.transpose();
  return out;
}

}  // namespace sigmak::equation
