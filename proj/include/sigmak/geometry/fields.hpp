#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sigmak/geometry/grid.hpp"
#include "sigmak/geometry/metric_models.hpp"

namespace sigmak::geometry {

template <int D>
using Vec = Eigen::Matrix<double, D, 1>;
template <int D>
using Mat = Eigen::Matrix<double, D, D>;

enum class ScalarRole { u, f, eta, K, R_scalar, tau, residual, generic };
enum class TensorRole { ricci, schouten, modified_schouten, W, V, S, second_fundamental_form, generic };

std::string to_string(ScalarRole role);
std::string to_string(TensorRole role);

inline constexpr int packed_size(int n) { return n * (n + 1) / 2; }
inline constexpr int packed_index(int n, int i, int j) {
  return i <= j ? i * n - i * (i - 1) / 2 + (j - i) : j * n - j * (j - 1) / 2 + (i - j);
}

struct ScalarField {
  ChartGrid grid;
  ScalarRole role = ScalarRole::generic;
  std::vector<double> values;

  ScalarField(ChartGrid g, ScalarRole r = ScalarRole::generic, double fill = 0.0);
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  std::size_t size() const { return values.size(); }
  void check_finite() const;
};

/// Symmetric 2-tensor per grid point, stored as the packed upper triangle.
struct Tensor2Field {
  ChartGrid grid;
  TensorRole role = TensorRole::generic;
  int n = 0;
  std::vector<double> values;

  Tensor2Field(ChartGrid g, TensorRole r = TensorRole::generic);

  double component(std::size_t p, int i, int j) const {
    return values[p * static_cast<std::size_t>(packed_size(n)) + static_cast<std::size_t>(packed_index(n, i, j))];
  }
  Eigen::MatrixXd matrix(std::size_t p) const;
  void set(std::size_t p, const Eigen::MatrixXd& m);

  template <int D>
  Mat<D> at(std::size_t p) const {
    Mat<D> m;
    const double* v = values.data() + p * static_cast<std::size_t>(packed_size(D));
    int k = 0;
    for (int i = 0; i < D; ++i)
      for (int j = i; j < D; ++j) m(i, j) = m(j, i) = v[k++];
    return m;
  }
  template <int D>
  void put(std::size_t p, const Mat<D>& m) {
    double* v = values.data() + p * static_cast<std::size_t>(packed_size(D));
    int k = 0;
    for (int i = 0; i < D; ++i)
      for (int j = i; j < D; ++j) v[k++] = 0.5 * (m(i, j) + m(j, i));
  }
};

/// Scalar values on the boundary face of a half-ball chart.
struct BoundaryScalarField {
  ChartGrid grid;
  ScalarRole role = ScalarRole::generic;
  std::vector<std::size_t> points;  // flat grid indices of the face points
  std::vector<double> values;
};

/// Symmetric (n-1)x(n-1) tangential tensor on the boundary face.
struct BoundaryTensorField {
  ChartGrid grid;
  TensorRole role = TensorRole::generic;
  int dim = 0;
  std::vector<std::size_t> points;
  std::vector<double> values;
  Eigen::MatrixXd matrix(std::size_t k) const;
};

/// Metric = closed-form model times an optional pointwise conformal scale.
/// Storing the scale rather than the tensor keeps large 4-d grids affordable.
class MetricField {
 public:
  MetricField(ChartGrid grid, std::shared_ptr<const MetricModel> model);

  const ChartGrid& grid() const { return grid_; }
  const MetricModel& model() const { return *model_; }
  std::shared_ptr<const MetricModel> model_ptr() const { return model_; }
  bool fermi_form() const { return model_->fermi_form() && scale_.empty(); }
  bool has_scale() const { return !scale_.empty(); }
  double scale(std::size_t p) const { return scale_.empty() ? 1.0 : scale_[p]; }

  template <int D>
  Mat<D> at(std::size_t p) const {
    double x[kMaxDim];
    grid_.coords(p, x);
    Mat<D> g;
    model_->evaluate(x, D, g.data());
    if (!scale_.empty()) g *= scale_[p];
    return g;
  }
  /// Same as at<D>(p) with the coordinates of p supplied by the caller.
  template <int D>
  Mat<D> at_coords(const double* x, std::size_t p) const {
    Mat<D> g;
    model_->evaluate(x, D, g.data());
    if (!scale_.empty()) g *= scale_[p];
    return g;
  }
  Eigen::MatrixXd matrix(std::size_t p) const;

  /// e^{-2u} times this metric.
  MetricField conformal(const ScalarField& u) const;
  /// Throws a metric error at the first point where g is not positive definite.
  void validate() const;

 private:
  ChartGrid grid_;
  std::shared_ptr<const MetricModel> model_;
  std::vector<double> scale_;
};

}  // namespace sigmak::geometry
