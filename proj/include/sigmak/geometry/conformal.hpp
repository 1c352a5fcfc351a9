#pragma once

#include "sigmak/common/parallel.hpp"
#include "sigmak/geometry/fields.hpp"
#include "sigmak/geometry/stencil.hpp"

namespace sigmak::geometry {

/// g~ = e^{-2u} g.
MetricField conformal_metric(const MetricField& g, const ScalarField& u);

/// Nabla^2 u + du (x) du - |du|^2 g / 2 + A, covariant derivatives of g.
/// `cls` selects how u is differentiated at non-periodic faces.
Tensor2Field schouten_transform(const MetricField& g, const ScalarField& u, const Tensor2Field& A,
                                FieldClass cls = FieldClass::geometric, Exec exec = default_exec());

struct RoundTripError {
  double max_error = 0.0;      // max over points and components
  std::size_t worst_point = 0;
  double max_reference = 0.0;  // max |A_g~| for scale
};

/// Streams schouten(conformal_metric(g, u)) against schouten_transform(g, u, schouten(g))
/// point by point without storing tensor fields; used for large 4-d grids.
RoundTripError conformal_roundtrip_error(const MetricField& g, const ScalarField& u, Exec exec = default_exec());

}  // namespace sigmak::geometry
