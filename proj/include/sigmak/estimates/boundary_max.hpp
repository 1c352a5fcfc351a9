#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigmak/common/parallel.hpp"
#include "sigmak/equation/problem.hpp"

namespace sigmak::estimates {

struct BoundaryMaxEntry {
  double p = 0.0;
  std::size_t argmax = 0;           // flat index of the maximum of eta K e^{p x_n}
  bool interior = false;            // x_n > 0 at the argmax
  double value = 0.0;
  std::size_t face_argmax = 0;      // maximum of the same function restricted to the face
  double face_value = 0.0;
  double face_normal_derivative = 0.0;  // one-sided d_n of the function at face_argmax
};

struct BoundaryMaxReport {
  bool skipped = false;             // K <= 0 everywhere
  std::string note;
  std::vector<BoundaryMaxEntry> entries;  // in increasing p
  std::optional<double> minimal_interior_p;
  bool monotone = true;             // interior at p implies interior at every larger tested p
  double max_face_normal_derivative = 0.0;  // |u_n| on the face, for the record
  double unnn_ratio_min = 0.0;      // u_nnn / (K + 1) over face points in B_r
  double unnn_ratio_max = 0.0;
};

/// Requires a half-ball chart with totally geodesic face and |u_n| <= bc_tol max(1, sup|du|) on
/// the face (precondition error otherwise). Exhaustive search over the grid for each p.
BoundaryMaxReport boundary_max_test(const geometry::ScalarField& u, const geometry::MetricField& g,
                                    const equation::ProblemSpec& spec, std::vector<double> p_list, double r,
                                    double bc_tol = 0.05, Exec exec = default_exec());

nlohmann::json to_json(const BoundaryMaxReport& report);

}  // namespace sigmak::estimates
