#include "sigmak/estimates/boundary_max.hpp"

#include <algorithm>
#include <cmath>

#include "sigmak/common/errors.hpp"
#include "sigmak/estimates/cutoff.hpp"
#include "sigmak/estimates/quantities.hpp"
#include "sigmak/geometry/boundary.hpp"
#include "sigmak/geometry/field_io.hpp"
#include "sigmak/geometry/stencil.hpp"

namespace sigmak::estimates {

using geometry::ChartKind;
using geometry::ScalarField;

BoundaryMaxReport boundary_max_test(const ScalarField& u, const geometry::MetricField& g, const equation::ProblemSpec& spec,
                                    std::vector<double> p_list, double r, double bc_tol, Exec exec) {
  const auto& grid = g.grid();
  require(grid.kind() == ChartKind::half_ball_fermi, ErrorKind::precondition, "boundary-max test needs a half-ball chart");
  require(u.grid == grid, ErrorKind::argument, "u lives on a different grid than the metric");
  require(!p_list.empty(), ErrorKind::argument, "p list is empty");
  const auto sff = geometry::second_fundamental_form(g);
  require(sff.totally_geodesic, ErrorKind::precondition,
          "boundary-max test needs a totally geodesic face (max |L| = " + geometry::format_double(sff.max_L) + ")");

  const equation::GeometryCache geo(g, exec);
  const auto d = derivative_fields(u, geo, exec);
  const auto K = compute_K(d, spec.a);
  const auto cut = make_cutoff(grid, r, exec);
  const int nax = grid.normal_axis();

  BoundaryMaxReport out;
  double sup_grad = 0.0;
  for (double v : d.grad_sq.values) sup_grad = std::max(sup_grad, std::sqrt(v));
  const auto face = grid.boundary_face_points();
  for (std::size_t q : face) out.max_face_normal_derivative = std::max(out.max_face_normal_derivative, std::abs(geometry::normal_derivative(u, g, q)));
  if (out.max_face_normal_derivative > bc_tol * std::max(1.0, sup_grad))
    fail(ErrorKind::precondition, "u_n = 0 fails on the face: max |u_n| = " + geometry::format_double(out.max_face_normal_derivative));

  bool positive = false;
  for (std::size_t p = 0; p < grid.size(); ++p)
    if (cut.eta.values[p] > 0.0 && K.values[p] > 0.0) positive = true;
  if (!positive) {
    out.skipped = true;
    out.note = "K <= 0 on the support of the cut-off; gradient bound follows directly";
    return out;
  }

  bool first_ratio = true;
  for (std::size_t q : face) {
    if (!(cut.eta.values[q] > 0.0)) continue;
    const auto s = geometry::forward_third_derivative(grid, grid.multi(q), nax);
    const double ratio = s.apply(u.values.data()) / (K.values[q] + 1.0);
    out.unnn_ratio_min = first_ratio ? ratio : std::min(out.unnn_ratio_min, ratio);
    out.unnn_ratio_max = first_ratio ? ratio : std::max(out.unnn_ratio_max, ratio);
    first_ratio = false;
  }

  std::sort(p_list.begin(), p_list.end());
  ScalarField H(grid, geometry::ScalarRole::generic, 0.0);
  double x[geometry::kMaxDim];
  bool seen_interior = false;
  for (double pw : p_list) {
    for (std::size_t q = 0; q < grid.size(); ++q) {
      grid.coords(q, x);
      H.values[q] = cut.eta.values[q] * K.values[q] * std::exp(pw * x[nax]);
    }
    BoundaryMaxEntry e;
    e.p = pw;
    e.value = H.values[0];
    for (std::size_t q = 1; q < grid.size(); ++q)
      if (H.values[q] > e.value) {
        e.value = H.values[q];
        e.argmax = q;
      }
    e.interior = !grid.on_boundary_face(e.argmax);
    e.face_argmax = face.front();
    e.face_value = H.values[face.front()];
    for (std::size_t q : face)
      if (H.values[q] > e.face_value) {
        e.face_value = H.values[q];
        e.face_argmax = q;
      }
    e.face_normal_derivative = geometry::forward_first_derivative(grid, grid.multi(e.face_argmax), nax).apply(H.values.data());
    if (e.interior && !out.minimal_interior_p) out.minimal_interior_p = pw;
    if (seen_interior && !e.interior) out.monotone = false;
    seen_interior = seen_interior || e.interior;
    out.entries.push_back(e);
  }
  return out;
}

nlohmann::json to_json(const BoundaryMaxReport& report) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : report.entries)
    entries.push_back({{"p", e.p},
                       {"argmax", e.argmax},
                       {"location", e.interior ? "interior" : "boundary"},
                       {"value", e.value},
                       {"face_argmax", e.face_argmax},
                       {"face_value", e.face_value},
                       {"face_normal_derivative", e.face_normal_derivative}});
  nlohmann::json j = {{"skipped", report.skipped},
                      {"note", report.note},
                      {"entries", entries},
                      {"monotone", report.monotone},
                      {"max_face_normal_derivative", report.max_face_normal_derivative},
                      {"unnn_ratio_min", report.unnn_ratio_min},
                      {"unnn_ratio_max", report.unnn_ratio_max}};
  j["minimal_interior_p"] = report.minimal_interior_p ? nlohmann::json(*report.minimal_interior_p) : nlohmann::json(nullptr);
  return j;
}

}  // namespace sigmak::estimates
