#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sigmak/geometry/fields.hpp"

namespace sigmak::geometry {

/// Round-trippable decimal form used in every CSV cell.
std::string format_double(double v);

std::string role_name(ScalarRole role);
std::string role_name(TensorRole role);

/// Columns: index, x0..x{n-1}, then one column per field. All fields share the grid.
void write_scalar_csv(std::ostream& os, const std::vector<std::pair<std::string, const ScalarField*>>& fields);

/// Columns: index, x0..x{n-1}, then T_ij for i <= j.
void write_tensor_csv(std::ostream& os, const Tensor2Field& field);

/// Columns: index, x0..x{n-2}, value.
void write_boundary_csv(std::ostream& os, const BoundaryScalarField& field);

/// {"chart": {...}, "metric": {"model": ..., "params": {...}}}
MetricField metric_from_json(const nlohmann::json& j);

}  // namespace sigmak::geometry
