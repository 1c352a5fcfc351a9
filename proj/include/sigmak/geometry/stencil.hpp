#pragma once

#include <array>
#include <cstddef>

#include "sigmak/geometry/grid.hpp"

namespace sigmak::geometry {

/// How derivatives treat the non-periodic chart faces.
///   geometric: second-order one-sided stencils (metric data and generic fields)
///   solution:  ghost reflection on Neumann faces, one-sided on Dirichlet faces
///   neumann:   ghost reflection on every non-periodic face
enum class FieldClass { geometric, solution, neumann };

struct StencilTerm {
  std::size_t index;
  double weight;
};

/// Finite list of (grid index, weight) pairs; duplicates are merged on insertion.
class Stencil {
 public:
  static constexpr int kCapacity = 16;

  void add(std::size_t index, double weight);
  int size() const { return count_; }
  const StencilTerm* begin() const { return terms_.data(); }
  const StencilTerm* end() const { return terms_.data() + count_; }
  double apply(const double* values) const {
    double s = 0.0;
    for (int i = 0; i < count_; ++i) s += terms_[static_cast<std::size_t>(i)].weight * values[terms_[static_cast<std::size_t>(i)].index];
    return s;
  }

 private:
  std::array<StencilTerm, kCapacity> terms_{};
  int count_ = 0;
};

Stencil first_derivative(const ChartGrid& grid, const Multi& m, int axis, FieldClass cls);
Stencil second_derivative(const ChartGrid& grid, const Multi& m, int axis, FieldClass cls);
/// d_a d_b as the composition of the two first-derivative stencils (a != b).
Stencil mixed_derivative(const ChartGrid& grid, const Multi& m, int a, int b, FieldClass cls);
/// Forward one-sided first derivative along `axis` (second order), used for normal derivatives on the face.
Stencil forward_first_derivative(const ChartGrid& grid, const Multi& m, int axis);
/// Forward one-sided third derivative along `axis` (second order).
Stencil forward_third_derivative(const ChartGrid& grid, const Multi& m, int axis);

}  // namespace sigmak::geometry
