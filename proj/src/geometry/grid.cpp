#include "sigmak/geometry/grid.hpp"

#include <cmath>
#include <numbers>

#include "sigmak/common/errors.hpp"

namespace sigmak::geometry {

std::string to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::periodic_torus: return "periodic_torus";
    case ChartKind::sphere_chart: return "sphere_chart";
    case ChartKind::half_ball_fermi: return "half_ball_fermi";
  }
  return "unknown";
}

ChartKind chart_kind_from_string(const std::string& s) {
  if (s == "periodic_torus") return ChartKind::periodic_torus;
  if (s == "sphere_chart") return ChartKind::sphere_chart;
  if (s == "half_ball_fermi") return ChartKind::half_ball_fermi;
  fail(ErrorKind::validation, "unknown chart kind '" + s + "'");
}

namespace {

void check_common(int n, int resolution) {
  require(n >= 3 && n <= kMaxDim, ErrorKind::dimension,
          "chart dimension " + std::to_string(n) + " outside [3, " + std::to_string(kMaxDim) + "]");
  require(resolution >= 5, ErrorKind::argument, "resolution must be at least 5 points per axis");
}

}  // namespace

ChartGrid ChartGrid::periodic_torus(int n, int resolution) {
  check_common(n, resolution);
  require(resolution >= 6, ErrorKind::argument, "periodic resolution must leave at least 5 unique points");
  ChartGrid g;
  g.kind_ = ChartKind::periodic_torus;
  g.n_ = n;
  g.resolution_ = resolution;
  g.h_ = 2.0 * std::numbers::pi / (resolution - 1);
  g.radius_ = std::numbers::pi;
  for (int a = 0; a < n; ++a) {
    g.extent_[static_cast<std::size_t>(a)] = resolution - 1;
    g.origin_[static_cast<std::size_t>(a)] = 0.0;
    g.faces_[static_cast<std::size_t>(2 * a)] = g.faces_[static_cast<std::size_t>(2 * a + 1)] = FaceCondition::periodic;
  }
  g.outer_ = FaceCondition::periodic;
  g.finish();
  return g;
}

ChartGrid ChartGrid::sphere_chart(int n, int resolution, double half_width) {
  check_common(n, resolution);
  require(half_width > 0.0 && std::isfinite(half_width), ErrorKind::argument, "half width must be positive");
  ChartGrid g;
  g.kind_ = ChartKind::sphere_chart;
  g.n_ = n;
  g.resolution_ = resolution;
  g.radius_ = half_width;
  g.h_ = 2.0 * half_width / (resolution - 1);
  for (int a = 0; a < n; ++a) {
    g.extent_[static_cast<std::size_t>(a)] = resolution;
    g.origin_[static_cast<std::size_t>(a)] = -half_width;
    g.faces_[static_cast<std::size_t>(2 * a)] = g.faces_[static_cast<std::size_t>(2 * a + 1)] = FaceCondition::neumann;
  }
  g.outer_ = FaceCondition::neumann;
  g.finish();
  return g;
}

ChartGrid ChartGrid::half_ball(int n, int resolution, double radius, FaceCondition outer) {
  check_common(n, resolution);
  require(resolution % 2 == 1, ErrorKind::argument, "half-ball resolution must be odd");
  require((resolution + 1) / 2 >= 5, ErrorKind::argument, "half-ball normal axis needs at least 5 points");
  require(radius > 0.0 && std::isfinite(radius), ErrorKind::argument, "radius must be positive");
  require(outer != FaceCondition::periodic, ErrorKind::argument, "half-ball outer faces cannot be periodic");
  ChartGrid g;
  g.kind_ = ChartKind::half_ball_fermi;
  g.n_ = n;
  g.resolution_ = resolution;
  g.radius_ = radius;
  g.h_ = 2.0 * radius / (resolution - 1);
  for (int a = 0; a < n; ++a) {
    const auto s = static_cast<std::size_t>(a);
    if (a < n - 1) {
      g.extent_[s] = resolution;
      g.origin_[s] = -radius;
      g.faces_[2 * s] = g.faces_[2 * s + 1] = outer;
    } else {
      g.extent_[s] = (resolution + 1) / 2;
      g.origin_[s] = 0.0;
      g.faces_[2 * s] = FaceCondition::neumann;
      g.faces_[2 * s + 1] = outer;
    }
  }
  g.outer_ = outer;
  g.finish();
  return g;
}

void ChartGrid::finish() {
  std::size_t s = 1;
  for (int a = 0; a < n_; ++a) {
    stride_[static_cast<std::size_t>(a)] = s;
    s *= static_cast<std::size_t>(extent_[static_cast<std::size_t>(a)]);
  }
  size_ = s;
}

Multi ChartGrid::multi(std::size_t index) const {
  Multi m{};
  for (int a = 0; a < n_; ++a) {
    const auto e = static_cast<std::size_t>(extent_[static_cast<std::size_t>(a)]);
    m[static_cast<std::size_t>(a)] = static_cast<int>(index % e);
    index /= e;
  }
  return m;
}

std::size_t ChartGrid::flat(const Multi& m) const {
  std::size_t idx = 0;
  for (int a = 0; a < n_; ++a)
    idx += static_cast<std::size_t>(m[static_cast<std::size_t>(a)]) * stride_[static_cast<std::size_t>(a)];
  return idx;
}

void ChartGrid::coords(std::size_t index, double* x) const {
  for (int a = 0; a < n_; ++a) {
    const auto e = static_cast<std::size_t>(extent_[static_cast<std::size_t>(a)]);
    x[a] = origin_[static_cast<std::size_t>(a)] + h_ * static_cast<double>(index % e);
    index /= e;
  }
}

std::array<double, kMaxDim> ChartGrid::center() const {
  std::array<double, kMaxDim> c{};
  if (kind_ == ChartKind::periodic_torus)
    for (int a = 0; a < n_; ++a) c[static_cast<std::size_t>(a)] = std::numbers::pi;
  return c;
}

double ChartGrid::distance_to_center(std::size_t index) const {
  double x[kMaxDim];
  coords(index, x);
  const auto c = center();
  double s = 0.0;
  for (int a = 0; a < n_; ++a) s += (x[a] - c[static_cast<std::size_t>(a)]) * (x[a] - c[static_cast<std::size_t>(a)]);
  return std::sqrt(s);
}

bool ChartGrid::on_boundary_face(std::size_t index) const {
  if (kind_ != ChartKind::half_ball_fermi) return false;
  return index / stride_[static_cast<std::size_t>(n_ - 1)] == 0;
}

std::vector<std::size_t> ChartGrid::boundary_face_points() const {
  std::vector<std::size_t> pts;
  if (kind_ != ChartKind::half_ball_fermi) return pts;
  const std::size_t count = stride_[static_cast<std::size_t>(n_ - 1)];
  pts.resize(count);
  for (std::size_t i = 0; i < count; ++i) pts[i] = i;
  return pts;
}

bool ChartGrid::is_dirichlet(std::size_t index) const {
  const Multi m = multi(index);
  for (int a = 0; a < n_; ++a) {
    const int i = m[static_cast<std::size_t>(a)];
    if (i == 0 && face(a, 0) == FaceCondition::dirichlet) return true;
    if (i == extent(a) - 1 && face(a, 1) == FaceCondition::dirichlet) return true;
  }
  return false;
}

bool ChartGrid::operator==(const ChartGrid& o) const {
  return kind_ == o.kind_ && n_ == o.n_ && resolution_ == o.resolution_ && h_ == o.h_ && radius_ == o.radius_ &&
         outer_ == o.outer_;
}

void to_json(nlohmann::json& j, const ChartGrid& g) {
  j = nlohmann::json{{"kind", to_string(g.kind())}, {"n", g.dim()}, {"resolution", g.resolution()},
                     {"r", g.radius()}, {"h", g.h()}};
  if (g.kind() == ChartKind::half_ball_fermi)
    j["outer_bc"] = g.outer_condition() == FaceCondition::dirichlet ? "dirichlet" : "neumann";
}

ChartGrid chart_from_json(const nlohmann::json& j) {
  const ChartKind kind = chart_kind_from_string(j.at("kind").get<std::string>());
  const int n = j.at("n").get<int>();
  const int res = j.at("resolution").get<int>();
  switch (kind) {
    case ChartKind::periodic_torus: return ChartGrid::periodic_torus(n, res);
    case ChartKind::sphere_chart: return ChartGrid::sphere_chart(n, res, j.value("r", 0.5));
    case ChartKind::half_ball_fermi: {
      const std::string bc = j.value("outer_bc", std::string("dirichlet"));
      require(bc == "dirichlet" || bc == "neumann", ErrorKind::validation, "outer_bc must be dirichlet or neumann");
      return ChartGrid::half_ball(n, res, j.value("r", 1.0),
                                  bc == "dirichlet" ? FaceCondition::dirichlet : FaceCondition::neumann);
    }
  }
  fail(ErrorKind::validation, "unhandled chart kind");
}

}  // namespace sigmak::geometry
