#pragma once

#include <Eigen/Dense>

#include "sigmak/symfunc/operator_family.hpp"

namespace sigmak::equation {

/// Eigen-decomposition of g^{-1} T through the congruence M = L^{-1} T L^{-T}, g = L L^T.
/// lambda ascending; M = Q diag(lambda) Q^T.
struct GeneralizedEigen {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd Linv;
};

GeneralizedEigen generalized_eigen(const Eigen::MatrixXd& T, const Eigen::MatrixXd& g);

/// F^{ij} = dF(lambda(g^{-1} T)) / dT_ij, a symmetric contravariant tensor.
Eigen::MatrixXd spectral_gradient(const symfunc::OperatorSpec& op, const Eigen::MatrixXd& T, const Eigen::MatrixXd& g);

/// Second directional derivative d^2/ds^2 F(lambda(g^{-1}(T + sE))) at s = 0 by the divided
/// difference formula; pairs with relative gap below gap_tol use the confluent limit.
double spectral_second_derivative(const symfunc::OperatorSpec& op, const Eigen::MatrixXd& T, const Eigen::MatrixXd& g,
                                  const Eigen::MatrixXd& E, double gap_tol = 1e-8);

}  // namespace sigmak::equation
