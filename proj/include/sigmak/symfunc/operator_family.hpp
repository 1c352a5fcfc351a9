#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sigmak/symfunc/elementary.hpp"

namespace sigmak::symfunc {

enum class OperatorKind { sigma_root, quotient };

/// F = c0 (sigma_k / sigma_l)^(1/(k-l)) with c0 chosen so that F(1,...,1) = 1.
/// The sigma_k root is the case l = 0.
class OperatorSpec {
 public:
  static OperatorSpec sigma_root(int n, int k);
  static OperatorSpec quotient(int n, int k, int l);

  OperatorKind kind() const { return kind_; }
  int n() const { return n_; }
  int k() const { return k_; }
  int l() const { return l_; }
  double c0() const { return c0_; }
  ConeLabel cone() const { return {k_, ConeSign::positive}; }
  std::string name() const;

 private:
  OperatorSpec(OperatorKind kind, int n, int k, int l);
  OperatorKind kind_;
  int n_, k_, l_;
  double c0_;
};

void to_json(nlohmann::json& j, const OperatorSpec& spec);
OperatorSpec operator_from_json(const nlohmann::json& j);

double evaluate_F(const OperatorSpec& spec, std::span<const double> lambda);
std::vector<double> F_gradient(const OperatorSpec& spec, std::span<const double> lambda);
Eigen::MatrixXd F_hessian(const OperatorSpec& spec, std::span<const double> lambda);

/// Allocation-free value and gradient for the grid kernels. Throws like evaluate_F.
double F_value_gradient(const OperatorSpec& spec, std::span<const double> lambda, std::span<double> grad);

}  // namespace sigmak::symfunc
