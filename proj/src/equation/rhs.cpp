#include "sigmak/equation/rhs.hpp"

#include <algorithm>

#include "sigmak/common/errors.hpp"
#include "sigmak/geometry/stencil.hpp"

namespace sigmak::equation {

using geometry::ChartGrid;
using geometry::FieldClass;

double ScalarParameter::min() const {
  return field ? *std::min_element(field->values.begin(), field->values.end()) : constant;
}

double ScalarParameter::max() const {
  return field ? *std::max_element(field->values.begin(), field->values.end()) : constant;
}

RhsModel RhsModel::exp_decay(ScalarParameter psi, int k, double Lambda) {
  RhsModel m;
  m.kind = RhsKind::exp_decay;
  m.psi = std::move(psi);
  m.k_exp = k;
  m.Lambda = Lambda;
  return m;
}

std::string to_string(RhsKind kind) {
  switch (kind) {
    case RhsKind::exp_decay: return "exp_decay";
    case RhsKind::exp_linear: return "exp_linear";
    case RhsKind::quadratic: return "quadratic";
  }
  return "?";
}

RhsValue rhs_eval(const RhsModel& model, const ChartGrid& grid, std::size_t p, double u) {
  const double psi = model.psi.at(p);
  if (!(psi > 0.0)) fail(ErrorKind::model, "psi must be positive, got " + std::to_string(psi) + " at point " + std::to_string(p));
  RhsValue out;
  out.f = rhs_value(model, psi, u, &out.f_z);
  if (model.psi.field) {
    const double ratio = out.f / psi;
    const auto m = grid.multi(p);
    for (int a = 0; a < grid.dim(); ++a)
      out.grad_x[static_cast<std::size_t>(a)] =
          ratio * geometry::first_derivative(grid, m, a, FieldClass::geometric).apply(model.psi.field->values.data());
  }
  return out;
}

bool rhs_independent_of_u(const RhsModel& model) {
  switch (model.kind) {
    case RhsKind::exp_decay: return model.k_exp == 0;
    case RhsKind::exp_linear:
    case RhsKind::quadratic: return model.c == 0.0;
  }
  return false;
}

double measured_lambda(const RhsModel& model, const geometry::MetricField& g, double u_lo, double u_hi, int u_samples) {
  const ChartGrid& grid = g.grid();
  const int n = grid.dim();
  double worst = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Eigen::MatrixXd gi = g.matrix(p).inverse();
    for (int s = 0; s < u_samples; ++s) {
      const double u = u_samples == 1 ? u_lo : u_lo + (u_hi - u_lo) * s / (u_samples - 1.0);
      const RhsValue v = rhs_eval(model, grid, p, u);
      if (!(v.f > 0.0)) fail(ErrorKind::model, "f is not positive at point " + std::to_string(p));
      Eigen::VectorXd d(n);
      for (int a = 0; a < n; ++a) d(a) = v.grad_x[static_cast<std::size_t>(a)];
      worst = std::max({worst, std::sqrt(std::max(0.0, d.dot(gi * d))) / v.f, std::abs(v.f_z) / v.f});
    }
  }
  return worst;
}

void validate_rhs(const RhsModel& model, const geometry::MetricField& g, double u_lo, double u_hi) {
  if (model.kind == RhsKind::quadratic) require(model.c >= 0.0, ErrorKind::model, "quadratic rhs needs c >= 0");
  const double lam = measured_lambda(model, g, u_lo, u_hi);
  if (model.Lambda > 0.0 && lam > model.Lambda * (1.0 + 1e-12))
    fail(ErrorKind::model, "rhs violates |grad f| <= Lambda f or |f_z| <= Lambda f: measured " + std::to_string(lam) +
                               " > Lambda = " + std::to_string(model.Lambda));
}

}  // namespace sigmak::equation
