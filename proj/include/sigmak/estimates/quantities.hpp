#pragma once

#include "sigmak/common/parallel.hpp"
#include "sigmak/equation/kernels.hpp"

namespace sigmak::estimates {

/// |du|_g^2, the g-Frobenius norm of the covariant Hessian, and Lap_g u at every point.
struct DerivativeFields {
  geometry::ScalarField grad_sq;
  geometry::ScalarField hess_norm;
  geometry::ScalarField lap;
};

DerivativeFields derivative_fields(const geometry::ScalarField& u, const equation::GeometryCache& geo,
                                   Exec exec = default_exec());

/// K = Lap u + a |du|^2.
geometry::ScalarField compute_K(const geometry::ScalarField& u, const geometry::MetricField& g,
                                const equation::ScalarParameter& a, Exec exec = default_exec());
geometry::ScalarField compute_K(const DerivativeFields& d, const equation::ScalarParameter& a);

}  // namespace sigmak::estimates
