#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace sigmak::geometry {

inline constexpr int kMaxDim = 6;

enum class ChartKind { periodic_torus, sphere_chart, half_ball_fermi };
enum class FaceCondition { periodic, neumann, dirichlet };

using Multi = std::array<int, kMaxDim>;

std::string to_string(ChartKind kind);
ChartKind chart_kind_from_string(const std::string& s);

/// Structured grid over a coordinate chart. Axis 0 varies fastest in the flat index.
///
/// periodic_torus: [0, 2pi)^n, resolution counts the duplicated endpoint, so
///   resolution - 1 unique points per axis.
/// sphere_chart: [-r, r]^n in stereographic coordinates, Neumann on every face.
/// half_ball_fermi: [-r, r]^(n-1) x [0, r]; the face x_n = 0 is the boundary
///   face (Neumann), the remaining faces are artificial and take `outer`.
/// In every case h = (chart length) / (resolution - 1).
class ChartGrid {
 public:
  static ChartGrid periodic_torus(int n, int resolution);
  static ChartGrid sphere_chart(int n, int resolution, double half_width = 0.5);
  static ChartGrid half_ball(int n, int resolution, double radius = 1.0,
                             FaceCondition outer = FaceCondition::dirichlet);

  ChartKind kind() const { return kind_; }
  int dim() const { return n_; }
  int resolution() const { return resolution_; }
  double h() const { return h_; }
  double radius() const { return radius_; }
  int extent(int axis) const { return extent_[static_cast<std::size_t>(axis)]; }
  std::size_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }
  std::size_t size() const { return size_; }
  bool periodic(int axis) const { return face(axis, 0) == FaceCondition::periodic; }
  FaceCondition face(int axis, int side) const { return faces_[static_cast<std::size_t>(2 * axis + side)]; }
  FaceCondition outer_condition() const { return outer_; }

  Multi multi(std::size_t index) const;
  std::size_t flat(const Multi& m) const;
  double coord(int axis, int i) const { return origin_[static_cast<std::size_t>(axis)] + h_ * i; }
  void coords(std::size_t index, double* x) const;
  /// Chart centre: the cut-off and ball computations are centred here.
  std::array<double, kMaxDim> center() const;
  double distance_to_center(std::size_t index) const;

  bool has_boundary_face() const { return kind_ == ChartKind::half_ball_fermi; }
  int normal_axis() const { return n_ - 1; }
  bool on_boundary_face(std::size_t index) const;
  /// Flat indices of the boundary face x_n = 0 (empty unless half_ball_fermi).
  std::vector<std::size_t> boundary_face_points() const;
  bool is_dirichlet(std::size_t index) const;

  bool operator==(const ChartGrid& other) const;
  bool operator!=(const ChartGrid& other) const { return !(*this == other); }

 private:
  ChartGrid() = default;
  void finish();

  ChartKind kind_ = ChartKind::periodic_torus;
  int n_ = 0;
  int resolution_ = 0;
  double h_ = 0.0;
  double radius_ = 0.0;
  FaceCondition outer_ = FaceCondition::periodic;
  std::array<int, kMaxDim> extent_{};
  std::array<std::size_t, kMaxDim> stride_{};
  std::array<double, kMaxDim> origin_{};
  std::array<FaceCondition, 2 * kMaxDim> faces_{};
  std::size_t size_ = 0;
};

void to_json(nlohmann::json& j, const ChartGrid& grid);
ChartGrid chart_from_json(const nlohmann::json& j);

}  // namespace sigmak::geometry
