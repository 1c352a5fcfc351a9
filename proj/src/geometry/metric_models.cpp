#include "sigmak/geometry/metric_models.hpp"

#include <cmath>

#include "sigmak/common/errors.hpp"
#include "sigmak/geometry/grid.hpp"

namespace sigmak::geometry {

namespace {

void fill_diag(int n, double d, double* g) {
  for (int i = 0; i < n * n; ++i) g[i] = 0.0;
  for (int i = 0; i < n; ++i) g[i * n + i] = d;
}

class Flat final : public MetricModel {
 public:
  std::string name() const override { return "flat"; }
  void evaluate(const double*, int n, double* g) const override { fill_diag(n, 1.0, g); }
  bool fermi_form() const override { return true; }
};

class ScaledFlat final : public MetricModel {
 public:
  explicit ScaledFlat(double c) : c_(c) {
    require(c > 0.0 && std::isfinite(c), ErrorKind::metric, "scaled flat metric needs c > 0");
  }
  std::string name() const override { return "scaled_flat"; }
  void evaluate(const double*, int n, double* g) const override { fill_diag(n, c_, g); }
  nlohmann::json params() const override { return {{"c", c_}}; }

 private:
  double c_;
};

class RoundSphere final : public MetricModel {
 public:
  std::string name() const override { return "round_sphere"; }
  void evaluate(const double* x, int n, double* g) const override {
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) r2 += x[i] * x[i];
    const double f = 2.0 / (1.0 + r2);
    fill_diag(n, f * f, g);
  }
};

class PeriodicPerturbed final : public MetricModel {
 public:
  explicit PeriodicPerturbed(double eps) : eps_(eps) {
    require(std::abs(eps) < 0.5, ErrorKind::metric, "periodic perturbation needs |eps| < 0.5");
  }
  std::string name() const override { return "periodic_perturbed"; }
  void evaluate(const double* x, int n, double* g) const override {
    fill_diag(n, 1.0 + 0.5 * eps_ * std::cos(x[0]), g);
    double v[kMaxDim];
    for (int i = 0; i < n; ++i) v[i] = std::sin(x[(i + 1) % n]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g[j * n + i] += eps_ * v[i] * v[j];
  }
  nlohmann::json params() const override { return {{"eps", eps_}}; }
  void check_chart(const ChartGrid& grid) const override {
    require(grid.kind() == ChartKind::periodic_torus, ErrorKind::chart, "periodic_perturbed metric needs a torus chart");
  }

 private:
  double eps_;
};

class FermiProduct final : public MetricModel {
 public:
  explicit FermiProduct(double eps) : eps_(eps) {}
  std::string name() const override { return "fermi_product"; }
  void evaluate(const double* x, int n, double* g) const override {
    const double phi = eps_ * (std::sin(x[0]) + 0.5 * std::cos(x[1]));
    fill_diag(n, std::exp(2.0 * phi), g);
    g[n * n - 1] = 1.0;
  }
  bool fermi_form() const override { return true; }
  nlohmann::json params() const override { return {{"eps", eps_}}; }

 private:
  double eps_;
};

class WarpedFermi final : public MetricModel {
 public:
  explicit WarpedFermi(double c) : c_(c) {}
  std::string name() const override { return "warped_fermi"; }
  void evaluate(const double* x, int n, double* g) const override {
    const double w = 1.0 + c_ * x[n - 1];
    fill_diag(n, w * w, g);
    g[n * n - 1] = 1.0;
  }
  bool fermi_form() const override { return true; }
  nlohmann::json params() const override { return {{"c", c_}}; }
  void check_chart(const ChartGrid& grid) const override {
    if (grid.kind() != ChartKind::half_ball_fermi) return;
    require(1.0 - std::abs(c_) * grid.radius() > 0.0, ErrorKind::metric, "warped metric degenerates inside the chart");
  }

 private:
  double c_;
};

class Sheared final : public MetricModel {
 public:
  explicit Sheared(double c) : c_(c) {}
  std::string name() const override { return "sheared_fermi"; }
  void evaluate(const double* x, int n, double* g) const override {
    fill_diag(n, 1.0, g);
    for (int a = 0; a < n - 1; ++a) {
      const double w = 1.0 + c_ * (a + 1) * x[n - 1];
      g[a * n + a] = w * w;
    }
  }
  bool fermi_form() const override { return true; }
  nlohmann::json params() const override { return {{"c", c_}}; }
  void check_chart(const ChartGrid& grid) const override {
    if (grid.kind() != ChartKind::half_ball_fermi) return;
    require(1.0 - std::abs(c_) * (grid.dim() - 1) * grid.radius() > 0.0, ErrorKind::metric,
            "sheared metric degenerates inside the chart");
  }

 private:
  double c_;
};

}  // namespace

MetricModelPtr make_flat_metric() { return std::make_shared<Flat>(); }
MetricModelPtr make_scaled_flat_metric(double c) { return std::make_shared<ScaledFlat>(c); }
MetricModelPtr make_round_sphere_metric() { return std::make_shared<RoundSphere>(); }
MetricModelPtr make_periodic_perturbed_metric(double eps) { return std::make_shared<PeriodicPerturbed>(eps); }
MetricModelPtr make_fermi_product_metric(double eps) { return std::make_shared<FermiProduct>(eps); }
MetricModelPtr make_warped_fermi_metric(double c) { return std::make_shared<WarpedFermi>(c); }
MetricModelPtr make_sheared_fermi_metric(double c) { return std::make_shared<Sheared>(c); }

void to_json(nlohmann::json& j, const MetricModel& model) {
  j = nlohmann::json{{"model", model.name()}, {"params", model.params()}};
}

MetricModelPtr metric_model_from_json(const nlohmann::json& j) {
  const std::string name = j.at("model").get<std::string>();
  const nlohmann::json p = j.value("params", nlohmann::json::object());
  if (name == "flat") return make_flat_metric();
  if (name == "scaled_flat") return make_scaled_flat_metric(p.value("c", 1.0));
  if (name == "round_sphere") return make_round_sphere_metric();
  if (name == "periodic_perturbed") return make_periodic_perturbed_metric(p.value("eps", 0.1));
  if (name == "fermi_product") return make_fermi_product_metric(p.value("eps", 0.1));
  if (name == "warped_fermi") return make_warped_fermi_metric(p.value("c", 1.0));
  if (name == "sheared_fermi") return make_sheared_fermi_metric(p.value("c", 0.5));
  fail(ErrorKind::validation, "unknown metric model '" + name + "'");
}

}  // namespace sigmak::geometry
