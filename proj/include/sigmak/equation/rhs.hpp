#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include <json.hpp>

#include "sigmak/geometry/fields.hpp"

namespace sigmak::equation {

/// A constant or a grid field.
struct ScalarParameter {
  double constant = 0.0;
  std::optional<geometry::ScalarField> field;

  static ScalarParameter of(double c) { return {c, std::nullopt}; }
  static ScalarParameter of(geometry::ScalarField f) { return {0.0, std::move(f)}; }
  bool is_constant() const { return !field.has_value(); }
  double at(std::size_t p) const { return field ? field->values[p] : constant; }
  double min() const;
  double max() const;
};

enum class RhsKind {
  exp_decay,    // psi e^{-2 k u}
  exp_linear,   // psi e^{c u}
  quadratic,    // psi (1 + c u^2), c >= 0
};

struct RhsModel {
  RhsKind kind = RhsKind::exp_decay;
  ScalarParameter psi = ScalarParameter::of(1.0);
  int k_exp = 1;
  double c = 0.0;
  double Lambda = 0.0;  // claimed bound |grad_x f| <= Lambda f, |f_z| <= Lambda f; 0 = unchecked

  static RhsModel exp_decay(ScalarParameter psi, int k, double Lambda = 0.0);
};

struct RhsValue {
  double f = 0.0;
  double f_z = 0.0;
  std::array<double, geometry::kMaxDim> grad_x{};  // coordinate gradient, first n entries used
};

/// f(x_p, u) with its u and x derivatives; grad_x uses the second order stencil of psi.
RhsValue rhs_eval(const RhsModel& model, const geometry::ChartGrid& grid, std::size_t p, double u);

/// Only the value and f_z, for the grid kernels.
inline double rhs_value(const RhsModel& m, double psi, double u, double* f_z) {
  switch (m.kind) {
    case RhsKind::exp_decay: {
      const double f = psi * std::exp(-2.0 * m.k_exp * u);
      *f_z = -2.0 * m.k_exp * f;
      return f;
    }
    case RhsKind::exp_linear: {
      const double f = psi * std::exp(m.c * u);
      *f_z = m.c * f;
      return f;
    }
    case RhsKind::quadratic:
      *f_z = 2.0 * m.c * u * psi;
      return psi * (1.0 + m.c * u * u);
  }
  return 0.0;
}

/// True when f_z == 0 identically, so constants are a kernel on closed charts.
bool rhs_independent_of_u(const RhsModel& model);

/// Largest of |grad_x f|_g / f and |f_z| / f over the grid and a uniform sample of u in [u_lo, u_hi].
double measured_lambda(const RhsModel& model, const geometry::MetricField& g, double u_lo, double u_hi, int u_samples = 9);

/// Throws a model error when psi <= 0 somewhere or the claimed Lambda is violated on the sample.
void validate_rhs(const RhsModel& model, const geometry::MetricField& g, double u_lo, double u_hi);

std::string to_string(RhsKind kind);

}  // namespace sigmak::equation
