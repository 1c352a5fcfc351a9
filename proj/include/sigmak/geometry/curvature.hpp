#pragma once

#include <cstddef>
#include <vector>

#include "sigmak/common/parallel.hpp"
#include "sigmak/geometry/fields.hpp"

namespace sigmak::geometry {

/// Gamma^k_ij for every point, n^3 values per point.
struct ChristoffelField {
  ChartGrid grid;
  int n = 0;
  std::vector<double> values;
  double operator()(std::size_t p, int k, int i, int j) const {
    const auto N = static_cast<std::size_t>(n);
    return values[((p * N + static_cast<std::size_t>(k)) * N + static_cast<std::size_t>(i)) * N + static_cast<std::size_t>(j)];
  }
};

/// R^r_{s m v} for every point, n^4 values per point.
struct RiemannField {
  ChartGrid grid;
  int n = 0;
  std::vector<double> values;
  double operator()(std::size_t p, int r, int s, int m, int v) const {
    const auto N = static_cast<std::size_t>(n);
    return values[(((p * N + static_cast<std::size_t>(r)) * N + static_cast<std::size_t>(s)) * N +
                   static_cast<std::size_t>(m)) * N + static_cast<std::size_t>(v)];
  }
};

struct RicciFields {
  Tensor2Field ricci;
  ScalarField R;
};

struct CurvatureFields {
  RiemannField riemann;
  Tensor2Field ricci;
  ScalarField R;
};

ChristoffelField christoffel(const MetricField& g, Exec exec = default_exec());
CurvatureFields curvature(const MetricField& g, Exec exec = default_exec());
/// Ricci tensor and scalar curvature without materialising Riemann.
RicciFields ricci(const MetricField& g, Exec exec = default_exec());

Tensor2Field schouten(const MetricField& g, Exec exec = default_exec());
Tensor2Field modified_schouten(const MetricField& g, double t, Exec exec = default_exec());
/// Reuses a Ricci computation, e.g. along a continuation path in t.
Tensor2Field modified_schouten_from(const RicciFields& rc, const MetricField& g, double t, Exec exec = default_exec());

}  // namespace sigmak::geometry
