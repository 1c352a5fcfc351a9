#include "sigmak/geometry/stencil.hpp"

#include "sigmak/common/errors.hpp"

namespace sigmak::geometry {

void Stencil::add(std::size_t index, double weight) {
  for (int i = 0; i < count_; ++i) {
    if (terms_[static_cast<std::size_t>(i)].index == index) {
      terms_[static_cast<std::size_t>(i)].weight += weight;
      return;
    }
  }
  if (count_ == kCapacity) fail(ErrorKind::numerical, "stencil capacity exceeded");
  terms_[static_cast<std::size_t>(count_++)] = {index, weight};
}

namespace {

struct Rule1D {
  int offset[5];
  double weight[5];
  int count;
};

enum class Edge { reflect, one_sided };

Edge edge_rule(const ChartGrid& grid, int axis, int side, FieldClass cls) {
  switch (cls) {
    case FieldClass::geometric: return Edge::one_sided;
    case FieldClass::neumann: return Edge::reflect;
    case FieldClass::solution:
      return grid.face(axis, side) == FaceCondition::neumann ? Edge::reflect : Edge::one_sided;
  }
  return Edge::one_sided;
}

// Maps a shifted position back into [0, extent) by wrap or reflection.
int resolve(const ChartGrid& grid, int axis, int pos) {
  const int e = grid.extent(axis);
  if (grid.periodic(axis)) return ((pos % e) + e) % e;
  if (pos < 0) return -pos;
  if (pos >= e) return 2 * (e - 1) - pos;
  return pos;
}

Rule1D mirror(Rule1D r) {
  for (int i = 0; i < r.count; ++i) r.offset[i] = -r.offset[i];
  return r;
}

Rule1D first_rule(const ChartGrid& grid, int axis, int i, FieldClass cls, double h) {
  const Rule1D central{{-1, 1}, {-0.5 / h, 0.5 / h}, 2};
  if (grid.periodic(axis)) return central;
  const int e = grid.extent(axis);
  if (i == 0 && edge_rule(grid, axis, 0, cls) == Edge::one_sided)
    return {{0, 1, 2}, {-1.5 / h, 2.0 / h, -0.5 / h}, 3};
  if (i == e - 1 && edge_rule(grid, axis, 1, cls) == Edge::one_sided) {
    Rule1D r = mirror(Rule1D{{0, 1, 2}, {-1.5 / h, 2.0 / h, -0.5 / h}, 3});
    for (int k = 0; k < r.count; ++k) r.weight[k] = -r.weight[k];
    return r;
  }
  return central;
}

Rule1D second_rule(const ChartGrid& grid, int axis, int i, FieldClass cls, double h) {
  const double h2 = h * h;
  const Rule1D central{{-1, 0, 1}, {1.0 / h2, -2.0 / h2, 1.0 / h2}, 3};
  if (grid.periodic(axis)) return central;
  const int e = grid.extent(axis);
  const Rule1D forward{{0, 1, 2, 3}, {2.0 / h2, -5.0 / h2, 4.0 / h2, -1.0 / h2}, 4};
  if (i == 0 && edge_rule(grid, axis, 0, cls) == Edge::one_sided) return forward;
  if (i == e - 1 && edge_rule(grid, axis, 1, cls) == Edge::one_sided) return mirror(forward);
  return central;
}

void emit(const ChartGrid& grid, const Multi& m, int axis, const Rule1D& r, double scale, Stencil& out) {
  const std::size_t base = grid.flat(m);
  const int i = m[static_cast<std::size_t>(axis)];
  const std::size_t stride = grid.stride(axis);
  for (int k = 0; k < r.count; ++k) {
    const int j = resolve(grid, axis, i + r.offset[k]);
    out.add(base - static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(j) * stride, scale * r.weight[k]);
  }
}

}  // namespace

Stencil first_derivative(const ChartGrid& grid, const Multi& m, int axis, FieldClass cls) {
  Stencil s;
  emit(grid, m, axis, first_rule(grid, axis, m[static_cast<std::size_t>(axis)], cls, grid.h()), 1.0, s);
  return s;
}

Stencil second_derivative(const ChartGrid& grid, const Multi& m, int axis, FieldClass cls) {
  Stencil s;
  emit(grid, m, axis, second_rule(grid, axis, m[static_cast<std::size_t>(axis)], cls, grid.h()), 1.0, s);
  return s;
}

Stencil mixed_derivative(const ChartGrid& grid, const Multi& m, int a, int b, FieldClass cls) {
  require(a != b, ErrorKind::argument, "mixed derivative needs distinct axes");
  Stencil s;
  const Rule1D ra = first_rule(grid, a, m[static_cast<std::size_t>(a)], cls, grid.h());
  const Rule1D rb = first_rule(grid, b, m[static_cast<std::size_t>(b)], cls, grid.h());
  for (int k = 0; k < ra.count; ++k) {
    Multi q = m;
    q[static_cast<std::size_t>(a)] = resolve(grid, a, m[static_cast<std::size_t>(a)] + ra.offset[k]);
    emit(grid, q, b, rb, ra.weight[k], s);
  }
  return s;
}

Stencil forward_first_derivative(const ChartGrid& grid, const Multi& m, int axis) {
  require(m[static_cast<std::size_t>(axis)] + 2 < grid.extent(axis), ErrorKind::argument, "forward stencil leaves the grid");
  const double h = grid.h();
  Stencil s;
  emit(grid, m, axis, Rule1D{{0, 1, 2}, {-1.5 / h, 2.0 / h, -0.5 / h}, 3}, 1.0, s);
  return s;
}

Stencil forward_third_derivative(const ChartGrid& grid, const Multi& m, int axis) {
  require(m[static_cast<std::size_t>(axis)] + 4 < grid.extent(axis), ErrorKind::argument, "forward stencil leaves the grid");
  const double h3 = grid.h() * grid.h() * grid.h();
  Stencil s;
  emit(grid, m, axis, Rule1D{{0, 1, 2, 3, 4}, {-2.5 / h3, 9.0 / h3, -12.0 / h3, 7.0 / h3, -1.5 / h3}, 5}, 1.0, s);
  return s;
}

}  // namespace sigmak::geometry
