#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sigmak::symfunc {

enum class ConeSign { positive, negative };

/// Gårding cone label. The negative branch is the positive cone of -lambda.
struct ConeLabel {
  int k = 1;
  ConeSign sign = ConeSign::positive;
};

double binomial(int n, int k);

/// sigma_0..sigma_n of lambda, built with the product recurrence.
std::vector<double> sigma_all(std::span<const double> lambda);

double sigma(std::span<const double> lambda, int k);

/// sigma_k of lambda with the entries at `skip_a` and `skip_b` removed (-1 means none).
double sigma_without(std::span<const double> lambda, int k, int skip_a, int skip_b = -1);

/// d sigma_k / d lambda_i = sigma_{k-1}(lambda | i).
std::vector<double> sigma_gradient(std::span<const double> lambda, int k);

/// Off-diagonal entries sigma_{k-2}(lambda | i j); the diagonal vanishes.
Eigen::MatrixXd sigma_hessian(std::span<const double> lambda, int k);

bool in_cone(std::span<const double> lambda, ConeLabel cone);

/// Signed distance-like diagnostic: min over j <= k of the signed j-th root of
/// sigma_j / C(n, j). Positive exactly inside the cone, homogeneous of degree one.
double cone_distance(std::span<const double> lambda, ConeLabel cone);

/// l(n-k+1) sigma_l sigma_{k-1} - k(n-l+1) sigma_{l-1} sigma_k, nonnegative on Gamma_k.
double newton_maclaurin_residual(std::span<const double> lambda, int k, int l);

}  // namespace sigmak::symfunc
