#pragma once

#include <memory>
#include <string>

#include <json.hpp>

namespace sigmak::geometry {

class ChartGrid;

/// Closed-form metric g(x) in chart coordinates.
class MetricModel {
 public:
  virtual ~MetricModel() = default;
  virtual std::string name() const = 0;
  /// Writes the n x n components at x (column-major; symmetric).
  virtual void evaluate(const double* x, int n, double* g) const = 0;
  /// g = g_ab dx^a dx^b + (dx^n)^2 near x_n = 0.
  virtual bool fermi_form() const { return false; }
  virtual nlohmann::json params() const { return nlohmann::json::object(); }
  /// Rejects charts on which the formula is not meaningful (chart error).
  virtual void check_chart(const ChartGrid&) const {}
};

using MetricModelPtr = std::shared_ptr<const MetricModel>;

/// delta_ij.
MetricModelPtr make_flat_metric();
/// c delta_ij, c > 0.
MetricModelPtr make_scaled_flat_metric(double c);
/// Unit round sphere in stereographic coordinates: (2 / (1 + |x|^2))^2 delta_ij.
MetricModelPtr make_round_sphere_metric();
/// Non conformally flat metric on the torus: (1 + eps cos x_0 / 2) delta + eps v v^T, v_i = sin x_{i+1}.
MetricModelPtr make_periodic_perturbed_metric(double eps);
/// Fermi product metric e^{2 phi(x')} delta_ab + (dx^n)^2, phi = eps (sin x_0 + cos x_1 / 2); totally geodesic face.
MetricModelPtr make_fermi_product_metric(double eps);
/// Warped Fermi metric (1 + c x_n)^2 delta_ab + (dx^n)^2; umbilic face with tau = -c.
MetricModelPtr make_warped_fermi_metric(double c);
/// sum_a (1 + (a+1) c x_n)^2 (dx^a)^2 + (dx^n)^2; L = -diag((a+1) c), not umbilic for c != 0.
MetricModelPtr make_sheared_fermi_metric(double c);

void to_json(nlohmann::json& j, const MetricModel& model);
MetricModelPtr metric_model_from_json(const nlohmann::json& j);

}  // namespace sigmak::geometry
