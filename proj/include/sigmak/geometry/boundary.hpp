#pragma once

#include <cstddef>

#include "sigmak/geometry/fields.hpp"

namespace sigmak::geometry {

struct SecondFundamentalForm {
  BoundaryTensorField L;    // L_ab on the face, tangential block
  BoundaryScalarField tau;  // tr(g_T^{-1} L) / (n - 1) per face point
  bool umbilic = false;
  bool totally_geodesic = false;
  double max_L = 0.0;
  double max_g = 0.0;
  double umbilic_defect = 0.0;  // max |L - tau g_T|
};

/// L_ab = Gamma^n_ab / sqrt(g^nn) on the face x_n = 0, which is -d_n g_ab / 2 for a
/// Fermi-form metric. Totally geodesic iff max|L| <= tol max|g|; umbilic iff the
/// trace-free part is below the same threshold.
SecondFundamentalForm second_fundamental_form(const MetricField& g, double tol = 1e-8);

/// Unit inner normal derivative of u at a face point, one-sided in x_n.
double normal_derivative(const ScalarField& u, const MetricField& g, std::size_t face_point);

/// du/dnu - (tau_tilde e^{-u} - tau) on the face, tau taken from the umbilic metric g.
BoundaryScalarField boundary_condition_residual(const ScalarField& u, const MetricField& g, double tau_tilde,
                                                double tol = 1e-8);

}  // namespace sigmak::geometry
