#pragma once

#include "sigmak/common/parallel.hpp"
#include "sigmak/geometry/fields.hpp"

namespace sigmak::estimates {

/// Radial bump centred at the chart centre: eta = 1 - S(s) with the quintic smoothstep S
/// and s = (|x - c|^2 - r^2/4) / (3 r^2 / 4) clamped to [0, 1]. Coordinate norms.
struct CutoffField {
  geometry::ScalarField eta;
  double r = 0.0;
  double verified_gradient_bound = 0.0;  // max |d eta| r / eta^{1/2} over {eta > 0}
  double verified_hessian_bound = 0.0;   // max |d^2 eta| r^2 (Frobenius)
};

/// Throws an argument error unless 0 < r and B_r fits in the chart.
CutoffField make_cutoff(const geometry::ChartGrid& grid, double r, Exec exec = default_exec());

/// Profile value and its first two derivatives in rho^2 = |x - c|^2.
struct CutoffProfile {
  double value, d1, d2;
};
CutoffProfile cutoff_profile(double rho2, double r);

/// Largest admissible radius on this chart.
double max_cutoff_radius(const geometry::ChartGrid& grid);

}  // namespace sigmak::estimates
