#include "sigmak/geometry/fields.hpp"

#include <cmath>

#include "sigmak/common/errors.hpp"
#include "sigmak/common/parallel.hpp"

namespace sigmak::geometry {

std::string to_string(ScalarRole role) {
  switch (role) {
    case ScalarRole::u: return "u";
    case ScalarRole::f: return "f";
    case ScalarRole::eta: return "eta";
    case ScalarRole::K: return "K";
    case ScalarRole::R_scalar: return "R_scalar";
    case ScalarRole::tau: return "tau";
    case ScalarRole::residual: return "residual";
    case ScalarRole::generic: return "generic";
  }
  return "generic";
}

std::string to_string(TensorRole role) {
  switch (role) {
    case TensorRole::ricci: return "ricci";
    case TensorRole::schouten: return "schouten";
    case TensorRole::modified_schouten: return "modified_schouten";
    case TensorRole::W: return "W";
    case TensorRole::V: return "V";
    case TensorRole::S: return "S";
    case TensorRole::second_fundamental_form: return "second_fundamental_form";
    case TensorRole::generic: return "generic";
  }
  return "generic";
}

ScalarField::ScalarField(ChartGrid g, ScalarRole r, double fill) : grid(std::move(g)), role(r), values(grid.size(), fill) {}

void ScalarField::check_finite() const {
  for (std::size_t i = 0; i < values.size(); ++i)
    require(std::isfinite(values[i]), ErrorKind::numerical,
            "scalar field '" + to_string(role) + "' is not finite at point " + std::to_string(i));
}

Tensor2Field::Tensor2Field(ChartGrid g, TensorRole r)
    : grid(std::move(g)), role(r), n(grid.dim()), values(grid.size() * static_cast<std::size_t>(packed_size(n)), 0.0) {}

Eigen::MatrixXd Tensor2Field::matrix(std::size_t p) const {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = component(p, i, j);
  return m;
}

void Tensor2Field::set(std::size_t p, const Eigen::MatrixXd& m) {
  require(m.rows() == n && m.cols() == n, ErrorKind::dimension, "tensor component block has wrong shape");
  double* v = values.data() + p * static_cast<std::size_t>(packed_size(n));
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) v[k++] = 0.5 * (m(i, j) + m(j, i));
}

Eigen::MatrixXd BoundaryTensorField::matrix(std::size_t k) const {
  Eigen::MatrixXd m(dim, dim);
  const double* v = values.data() + k * static_cast<std::size_t>(packed_size(dim));
  int c = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) m(i, j) = m(j, i) = v[c++];
  return m;
}

MetricField::MetricField(ChartGrid grid, std::shared_ptr<const MetricModel> model)
    : grid_(std::move(grid)), model_(std::move(model)) {
  require(model_ != nullptr, ErrorKind::argument, "metric model is null");
  model_->check_chart(grid_);
}

Eigen::MatrixXd MetricField::matrix(std::size_t p) const {
  double x[kMaxDim];
  grid_.coords(p, x);
  const int n = grid_.dim();
  Eigen::MatrixXd g(n, n);
  model_->evaluate(x, n, g.data());
  if (!scale_.empty()) g *= scale_[p];
  return g;
}

MetricField MetricField::conformal(const ScalarField& u) const {
  require(u.grid == grid_, ErrorKind::argument, "conformal factor lives on a different grid");
  MetricField out(*this);
  out.scale_.assign(grid_.size(), 1.0);
  for_each_index(grid_.size(), [&](std::size_t p) {
    require(std::isfinite(u.values[p]), ErrorKind::argument, "conformal factor is not finite");
    out.scale_[p] = scale(p) * std::exp(-2.0 * u.values[p]);
  });
  return out;
}

void MetricField::validate() const {
  for_each_index(grid_.size(), [&](std::size_t p) {
    Eigen::LLT<Eigen::MatrixXd> llt(matrix(p));
    if (llt.info() != Eigen::Success)
      fail(ErrorKind::metric, "metric is not positive definite at point " + std::to_string(p));
  });
}

}  // namespace sigmak::geometry
