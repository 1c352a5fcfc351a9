#include "sigmak/geometry/field_io.hpp"

#include <cstdio>

#include "sigmak/common/errors.hpp"
#include "sigmak/geometry/metric_models.hpp"

namespace sigmak::geometry {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string role_name(ScalarRole role) {
  switch (role) {
    case ScalarRole::u: return "u";
    case ScalarRole::f: return "f";
    case ScalarRole::eta: return "eta";
    case ScalarRole::K: return "K";
    case ScalarRole::R_scalar: return "R";
    case ScalarRole::tau: return "tau";
    case ScalarRole::residual: return "residual";
    case ScalarRole::generic: return "value";
  }
  return "value";
}

std::string role_name(TensorRole role) {
  switch (role) {
    case TensorRole::ricci: return "Ric";
    case TensorRole::schouten: return "A";
    case TensorRole::modified_schouten: return "At";
    case TensorRole::W: return "W";
    case TensorRole::V: return "V";
    case TensorRole::S: return "S";
    case TensorRole::second_fundamental_form: return "L";
    case TensorRole::generic: return "T";
  }
  return "T";
}

namespace {

void write_coords(std::ostream& os, const ChartGrid& grid, std::size_t p, int dims) {
  const Multi m = grid.multi(p);
  for (int a = 0; a < dims; ++a) os << ',' << format_double(grid.coord(a, m[static_cast<std::size_t>(a)]));
}

void write_coord_header(std::ostream& os, int dims) {
  os << "index";
  for (int a = 0; a < dims; ++a) os << ",x" << a;
}

}  // namespace

void write_scalar_csv(std::ostream& os, const std::vector<std::pair<std::string, const ScalarField*>>& fields) {
  require(!fields.empty(), ErrorKind::argument, "no fields to write");
  const ChartGrid& grid = fields.front().second->grid;
  for (const auto& f : fields)
    require(f.second->grid == grid, ErrorKind::chart, "fields on different grids: " + f.first);
  write_coord_header(os, grid.dim());
  for (const auto& f : fields) os << ',' << f.first;
  os << '\n';
  for (std::size_t p = 0; p < grid.size(); ++p) {
    os << p;
    write_coords(os, grid, p, grid.dim());
    for (const auto& f : fields) os << ',' << format_double(f.second->values[p]);
    os << '\n';
  }
}

void write_tensor_csv(std::ostream& os, const Tensor2Field& field) {
  const ChartGrid& grid = field.grid;
  const int n = field.n;
  const std::string name = role_name(field.role);
  write_coord_header(os, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) os << ',' << name << '_' << i << j;
  os << '\n';
  for (std::size_t p = 0; p < grid.size(); ++p) {
    os << p;
    write_coords(os, grid, p, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) os << ',' << format_double(field.component(p, i, j));
    os << '\n';
  }
}

void write_boundary_csv(std::ostream& os, const BoundaryScalarField& field) {
  const int dims = field.grid.dim() - 1;
  write_coord_header(os, dims);
  os << ',' << role_name(field.role) << '\n';
  for (std::size_t k = 0; k < field.points.size(); ++k) {
    os << field.points[k];
    write_coords(os, field.grid, field.points[k], dims);
    os << ',' << format_double(field.values[k]) << '\n';
  }
}

MetricField metric_from_json(const nlohmann::json& j) {
  require(j.contains("chart") && j.contains("metric"), ErrorKind::validation,
          "metric definition needs 'chart' and 'metric' objects");
  ChartGrid grid = chart_from_json(j.at("chart"));
  return MetricField(grid, metric_model_from_json(j.at("metric")));
}

}  // namespace sigmak::geometry
