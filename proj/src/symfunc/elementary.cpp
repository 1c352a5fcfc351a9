#include "sigmak/symfunc/elementary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sigmak/common/errors.hpp"

namespace sigmak::symfunc {

namespace {

void check_finite(std::span<const double> lambda) {
  require(!lambda.empty(), ErrorKind::argument, "eigenvalue vector is empty");
  for (double v : lambda) require(std::isfinite(v), ErrorKind::argument, "eigenvalue vector has a non-finite entry");
}

void check_order(int n, int k) {
  require(k >= 0 && k <= n, ErrorKind::domain,
          "order k=" + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
}

// e_0..e_top of the entries not in {skip_a, skip_b}.
void accumulate(std::span<const double> lambda, int top, int skip_a, int skip_b, double* e) {
  e[0] = 1.0;
  for (int j = 1; j <= top; ++j) e[j] = 0.0;
  int used = 0;
  for (int i = 0; i < static_cast<int>(lambda.size()); ++i) {
    if (i == skip_a || i == skip_b) continue;
    ++used;
    const double x = lambda[static_cast<std::size_t>(i)];
    for (int j = std::min(used, top); j >= 1; --j) e[j] += x * e[j - 1];
  }
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

std::vector<double> sigma_all(std::span<const double> lambda) {
  check_finite(lambda);
  const int n = static_cast<int>(lambda.size());
  std::vector<double> e(static_cast<std::size_t>(n) + 1);
  accumulate(lambda, n, -1, -1, e.data());
  return e;
}

double sigma(std::span<const double> lambda, int k) {
  check_finite(lambda);
  check_order(static_cast<int>(lambda.size()), k);
  return sigma_without(lambda, k, -1, -1);
}

double sigma_without(std::span<const double> lambda, int k, int skip_a, int skip_b) {
  if (k < 0) return 0.0;
  const int n = static_cast<int>(lambda.size());
  int removed = 0;
  if (skip_a >= 0 && skip_a < n) ++removed;
  if (skip_b >= 0 && skip_b < n && skip_b != skip_a) ++removed;
  if (k > n - removed) return 0.0;
  double buf[64];
  std::vector<double> heap;
  double* e = buf;
  if (k + 1 > 64) {
    heap.resize(static_cast<std::size_t>(k) + 1);
    e = heap.data();
  }
  accumulate(lambda, k, skip_a, skip_b, e);
  return e[k];
}

std::vector<double> sigma_gradient(std::span<const double> lambda, int k) {
  check_finite(lambda);
  const int n = static_cast<int>(lambda.size());
  require(k >= 1 && k <= n, ErrorKind::domain, "gradient order k=" + std::to_string(k) + " outside [1, n]");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = sigma_without(lambda, k - 1, i);
  return g;
}

Eigen::MatrixXd sigma_hessian(std::span<const double> lambda, int k) {
  check_finite(lambda);
  const int n = static_cast<int>(lambda.size());
  check_order(n, k);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) h(i, j) = h(j, i) = sigma_without(lambda, k - 2, i, j);
  return h;
}

namespace {

std::vector<double> oriented(std::span<const double> lambda, ConeSign sign) {
  std::vector<double> v(lambda.begin(), lambda.end());
  if (sign == ConeSign::negative)
    for (double& x : v) x = -x;
  return v;
}

}  // namespace

bool in_cone(std::span<const double> lambda, ConeLabel cone) {
  check_finite(lambda);
  const int n = static_cast<int>(lambda.size());
  require(cone.k >= 1 && cone.k <= n, ErrorKind::domain,
          "cone order k=" + std::to_string(cone.k) + " outside [1, " + std::to_string(n) + "]");
  const auto v = oriented(lambda, cone.sign);
  std::vector<double> e(static_cast<std::size_t>(n) + 1);
  accumulate(v, cone.k, -1, -1, e.data());
  for (int j = 1; j <= cone.k; ++j)
    if (!(e[static_cast<std::size_t>(j)] > 0.0)) return false;
  return true;
}

double cone_distance(std::span<const double> lambda, ConeLabel cone) {
  check_finite(lambda);
  const int n = static_cast<int>(lambda.size());
  require(cone.k >= 1 && cone.k <= n, ErrorKind::domain,
          "cone order k=" + std::to_string(cone.k) + " outside [1, " + std::to_string(n) + "]");
  const auto v = oriented(lambda, cone.sign);
  std::vector<double> e(static_cast<std::size_t>(n) + 1);
  accumulate(v, cone.k, -1, -1, e.data());
  double d = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= cone.k; ++j) {
    const double q = e[static_cast<std::size_t>(j)] / binomial(n, j);
    const double root = std::copysign(std::pow(std::abs(q), 1.0 / j), q);
    d = std::min(d, root);
  }
  return d;
}

double newton_maclaurin_residual(std::span<const double> lambda, int k, int l) {
  check_finite(lambda);
  const int n = static_cast<int>(lambda.size());
  require(l >= 1 && l < k && k <= n, ErrorKind::domain, "Newton-Maclaurin needs 1 <= l < k <= n");
  require(in_cone(lambda, {k, ConeSign::positive}), ErrorKind::admissibility,
          "Newton-Maclaurin residual needs lambda in Gamma_k");
  const auto s = sigma_all(lambda);
  const auto at = [&](int j) { return s[static_cast<std::size_t>(j)]; };
  return static_cast<double>(l * (n - k + 1)) * at(l) * at(k - 1) -
         static_cast<double>(k * (n - l + 1)) * at(l - 1) * at(k);
}

}  // namespace sigmak::symfunc
