#include "sigmak/symfunc/operator_family.hpp"

#include <cmath>

#include "sigmak/common/errors.hpp"

namespace sigmak::symfunc {

OperatorSpec::OperatorSpec(OperatorKind kind, int n, int k, int l) : kind_(kind), n_(n), k_(k), l_(l) {
  require(n >= 1, ErrorKind::domain, "dimension must be positive");
  require(l >= 0 && l < k && k <= n, ErrorKind::domain,
          "operator orders need 0 <= l < k <= n, got k=" + std::to_string(k) + " l=" + std::to_string(l) +
              " n=" + std::to_string(n));
  c0_ = std::pow(binomial(n, l) / binomial(n, k), 1.0 / (k - l));
}

OperatorSpec OperatorSpec::sigma_root(int n, int k) { return OperatorSpec(OperatorKind::sigma_root, n, k, 0); }

OperatorSpec OperatorSpec::quotient(int n, int k, int l) {
  return OperatorSpec(l == 0 ? OperatorKind::sigma_root : OperatorKind::quotient, n, k, l);
}

std::string OperatorSpec::name() const {
  if (kind_ == OperatorKind::sigma_root) return "sigma_" + std::to_string(k_) + "_root";
  return "sigma_" + std::to_string(k_) + "_over_sigma_" + std::to_string(l_);
}

void to_json(nlohmann::json& j, const OperatorSpec& spec) {
  j = nlohmann::json{{"kind", spec.kind() == OperatorKind::sigma_root ? "sigma_root" : "quotient"},
                     {"n", spec.n()},
                     {"k", spec.k()},
                     {"l", spec.l()}};
}

OperatorSpec operator_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const int k = j.at("k").get<int>();
  const std::string kind = j.value("kind", std::string("sigma_root"));
  if (kind == "sigma_root") return OperatorSpec::sigma_root(n, k);
  require(kind == "quotient", ErrorKind::validation, "unknown operator kind '" + kind + "'");
  return OperatorSpec::quotient(n, k, j.at("l").get<int>());
}

namespace {

constexpr int kMaxStack = 32;

void check_lambda(const OperatorSpec& spec, std::span<const double> lambda) {
  require(static_cast<int>(lambda.size()) == spec.n(), ErrorKind::dimension,
          "eigenvalue vector has length " + std::to_string(lambda.size()) + ", operator expects " +
              std::to_string(spec.n()));
  require(spec.n() <= kMaxStack, ErrorKind::dimension, "dimension above supported maximum");
  if (!in_cone(lambda, spec.cone()))
    fail(ErrorKind::admissibility, "eigenvalues outside Gamma_" + std::to_string(spec.k()));
}

struct Ratio {
  double sk, sl, value;
};

Ratio ratio(const OperatorSpec& spec, std::span<const double> lambda) {
  const double sk = sigma_without(lambda, spec.k(), -1);
  const double sl = sigma_without(lambda, spec.l(), -1);
  if (!(sl > 0.0)) fail(ErrorKind::degenerate_quotient, "sigma_l is not positive");
  return {sk, sl, spec.c0() * std::pow(sk / sl, 1.0 / (spec.k() - spec.l()))};
}

}  // namespace

double evaluate_F(const OperatorSpec& spec, std::span<const double> lambda) {
  check_lambda(spec, lambda);
  return ratio(spec, lambda).value;
}

double F_value_gradient(const OperatorSpec& spec, std::span<const double> lambda, std::span<double> grad) {
  check_lambda(spec, lambda);
  const Ratio r = ratio(spec, lambda);
  const double m = 1.0 / (spec.k() - spec.l());
  for (int i = 0; i < spec.n(); ++i) {
    const double dk = sigma_without(lambda, spec.k() - 1, i);
    const double dl = spec.l() == 0 ? 0.0 : sigma_without(lambda, spec.l() - 1, i);
    grad[static_cast<std::size_t>(i)] = r.value * m * (dk / r.sk - dl / r.sl);
  }
  return r.value;
}

std::vector<double> F_gradient(const OperatorSpec& spec, std::span<const double> lambda) {
  std::vector<double> g(lambda.size());
  F_value_gradient(spec, lambda, g);
  return g;
}

Eigen::MatrixXd F_hessian(const OperatorSpec& spec, std::span<const double> lambda) {
  check_lambda(spec, lambda);
  const int n = spec.n();
  const Ratio r = ratio(spec, lambda);
  const double m = 1.0 / (spec.k() - spec.l());
  Eigen::VectorXd gk(n), gl(n), a(n);
  for (int i = 0; i < n; ++i) {
    gk(i) = sigma_without(lambda, spec.k() - 1, i) / r.sk;
    gl(i) = spec.l() == 0 ? 0.0 : sigma_without(lambda, spec.l() - 1, i) / r.sl;
  }
  a = m * (gk - gl);
  Eigen::MatrixXd h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double hk = i == j ? 0.0 : sigma_without(lambda, spec.k() - 2, i, j) / r.sk;
      const double hl = (i == j || spec.l() < 2) ? 0.0 : sigma_without(lambda, spec.l() - 2, i, j) / r.sl;
      h(i, j) = r.value * (a(i) * a(j) + m * (hk - gk(i) * gk(j) - hl + gl(i) * gl(j)));
    }
  }
  return h;
}

}  // namespace sigmak::symfunc
