#pragma once

#include <vector>

#include "sigmak/common/parallel.hpp"
#include "sigmak/geometry/fields.hpp"

namespace sigmak::estimates {

/// Trapezoid weights per grid point (uniform on periodic axes), including h^n.
std::vector<double> quadrature_weights(const geometry::ChartGrid& grid);
/// Trapezoid weights on the face x_n = 0 of a half-ball chart, in face-point order, including h^{n-1}.
std::vector<double> face_quadrature_weights(const geometry::ChartGrid& grid);

struct YamabeValue {
  double value = 0.0;
  double gradient_term = 0.0;   // int |du|^2
  double curvature_term = 0.0;  // (n-2)/(4(n-1)) int R u^2
  double boundary_term = 0.0;   // (n-2)/2 oint h u^2, h = tr(L)/(n-1) on the face x_n = 0
  double normalisation = 1.0;   // factor applied to u so that int |u|^{2n/(n-2)} = 1
};

/// Quadratic Yamabe quotient of u after rescaling to unit L^{2n/(n-2)} norm. Derivatives use
/// one-sided stencils at chart faces. Throws a normalization error for u = 0.
YamabeValue yamabe_functional(const geometry::ScalarField& u, const geometry::MetricField& g, Exec exec = default_exec());

/// (n-i-1)! / ((n-k)! (2k-2i-1)!!).
double bk_coefficient(int n, int k, int i);

/// sum_{i<k} C(n,k,i) sigma_i(lambda(g_T^{-1} A^T)) tau^{2k-2i-1} on the face. Half-ball charts
/// only (chart error); umbilicity error for a non-umbilic face.
geometry::BoundaryScalarField boundary_curvature_Bk(const geometry::MetricField& g, int k, Exec exec = default_exec());

struct FkValue {
  double value = 0.0;
  double interior = 0.0;  // int sigma_k(lambda(g^{-1} A_g)) dV_g
  double boundary = 0.0;  // oint B^k dA_g, zero without a boundary face
};

FkValue F_k_functional(const geometry::MetricField& g_hat, int k, Exec exec = default_exec());

}  // namespace sigmak::estimates
