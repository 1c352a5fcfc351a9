#include "sigmak/estimates/cutoff.hpp"

#include <algorithm>
#include <cmath>

#include "sigmak/common/errors.hpp"

namespace sigmak::estimates {

using geometry::ChartGrid;

CutoffProfile cutoff_profile(double rho2, double r) {
  const double width = 0.75 * r * r;
  const double s = (rho2 - 0.25 * r * r) / width;
  if (s <= 0.0) return {1.0, 0.0, 0.0};
  if (s >= 1.0) return {0.0, 0.0, 0.0};
  const double S = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
  const double dS = 30.0 * s * s * (1.0 - s) * (1.0 - s);
  const double ddS = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
  return {1.0 - S, -dS / width, -ddS / (width * width)};
}

double max_cutoff_radius(const ChartGrid& grid) { return grid.radius(); }

CutoffField make_cutoff(const ChartGrid& grid, double r, Exec exec) {
  require(r > 0.0 && std::isfinite(r), ErrorKind::argument, "cut-off radius must be positive");
  const double rmax = max_cutoff_radius(grid);
  require(r <= rmax * (1.0 + 1e-12), ErrorKind::argument,
          "cut-off radius " + std::to_string(r) + " exceeds the chart (max " + std::to_string(rmax) + ")");
  const int n = grid.dim();
  const auto c = grid.center();
  CutoffField out{geometry::ScalarField(grid, geometry::ScalarRole::eta, 0.0), r, 0.0, 0.0};
  std::vector<double> gradc(grid.size(), 0.0), hessc(grid.size(), 0.0);
  for_each_index(
      grid.size(),
      [&](std::size_t p) {
        double x[geometry::kMaxDim];
        grid.coords(p, x);
        double y[geometry::kMaxDim];
        double rho2 = 0.0;
        for (int a = 0; a < n; ++a) {
          y[a] = x[a] - c[static_cast<std::size_t>(a)];
          rho2 += y[a] * y[a];
        }
        const CutoffProfile f = cutoff_profile(rho2, r);
        out.eta.values[p] = f.value;
        // d_a eta = 2 f' y_a, d_ab eta = 4 f'' y_a y_b + 2 f' delta_ab
        const double grad = 2.0 * std::abs(f.d1) * std::sqrt(rho2);
        double h2 = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            const double h = 4.0 * f.d2 * y[a] * y[b] + (a == b ? 2.0 * f.d1 : 0.0);
            h2 += h * h;
          }
        if (f.value > 0.0) gradc[p] = grad * r / std::sqrt(f.value);
        hessc[p] = std::sqrt(h2) * r * r;
      },
      exec);
  out.verified_gradient_bound = *std::max_element(gradc.begin(), gradc.end());
  out.verified_hessian_bound = *std::max_element(hessc.begin(), hessc.end());
  return out;
}

}  // namespace sigmak::estimates
