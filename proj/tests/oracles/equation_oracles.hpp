#pragma once

// Direct evaluation of F(g^{-1} W) on a periodic grid: own central differences,
// Christoffel symbols from differenced metric samples, and sigma_k from principal minors.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

struct TorusPoint {
  int n;
  int m;         // points per axis
  double h;
  std::vector<int> idx;
};

inline std::size_t torus_flat(int n, int m, std::vector<int> idx) {
  std::size_t p = 0, stride = 1;
  for (int a = 0; a < n; ++a) {
    const int i = ((idx[static_cast<std::size_t>(a)] % m) + m) % m;
    p += stride * static_cast<std::size_t>(i);
    stride *= static_cast<std::size_t>(m);
  }
  return p;
}

inline std::vector<int> torus_multi(int n, int m, std::size_t p) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(p % static_cast<std::size_t>(m));
    p /= static_cast<std::size_t>(m);
  }
  return idx;
}

// Sum of the k x k principal minors.
inline double principal_minor_sum(const Eigen::MatrixXd& M, int k) {
  const int n = static_cast<int>(M.rows());
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<int> sel;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sel.push_back(i);
    Eigen::MatrixXd sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub(i, j) = M(sel[static_cast<std::size_t>(i)], sel[static_cast<std::size_t>(j)]);
    total += sub.determinant();
  }
  return total;
}

inline double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

struct DirectProblem {
  int n;
  int m;
  double t, a, b;
  std::function<Eigen::MatrixXd(const double*)> metric;  // g(x)
  std::function<Eigen::MatrixXd(const double*)> source;  // S(x)
};

// W tensor at grid point p of the torus with m points per axis, u given by flat samples.
inline Eigen::MatrixXd direct_W(const DirectProblem& P, const std::vector<double>& u, std::size_t p) {
  const int n = P.n;
  const double h = 2.0 * M_PI / P.m;
  const auto base = torus_multi(n, P.m, p);
  auto x_of = [&](std::vector<int> idx) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
      const int i = ((idx[static_cast<std::size_t>(a)] % P.m) + P.m) % P.m;
      x[static_cast<std::size_t>(a)] = h * i;
    }
    return x;
  };
  auto shifted = [&](int a, int da, int b, int db) {
    auto idx = base;
    idx[static_cast<std::size_t>(a)] += da;
    idx[static_cast<std::size_t>(b)] += db;
    return idx;
  };
  auto U = [&](const std::vector<int>& idx) { return u[torus_flat(n, P.m, idx)]; };

  const auto x0 = x_of(base);
  const Eigen::MatrixXd g = P.metric(x0.data());
  const Eigen::MatrixXd gi = g.inverse();

  std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    const auto xp = x_of(shifted(c, 1, c, 0));
    const auto xm = x_of(shifted(c, -1, c, 0));
    dg[static_cast<std::size_t>(c)] = (P.metric(xp.data()) - P.metric(xm.data())) / (2.0 * h);
  }
  // Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
  auto Gamma = [&](int k, int i, int j) {
    double s = 0.0;
    for (int l = 0; l < n; ++l)
      s += gi(k, l) * (dg[static_cast<std::size_t>(i)](j, l) + dg[static_cast<std::size_t>(j)](i, l) -
                       dg[static_cast<std::size_t>(l)](i, j));
    return 0.5 * s;
  };

  Eigen::VectorXd du(n);
  Eigen::MatrixXd d2(n, n);
  const double u0 = U(base);
  for (int a = 0; a < n; ++a) {
    du(a) = (U(shifted(a, 1, a, 0)) - U(shifted(a, -1, a, 0))) / (2.0 * h);
    for (int b = 0; b < n; ++b) {
      if (a == b)
        d2(a, a) = (U(shifted(a, 1, a, 0)) - 2.0 * u0 + U(shifted(a, -1, a, 0))) / (h * h);
      else
        d2(a, b) = (U(shifted(a, 1, b, 1)) - U(shifted(a, 1, b, -1)) - U(shifted(a, -1, b, 1)) +
                    U(shifted(a, -1, b, -1))) / (4.0 * h * h);
    }
  }
  Eigen::MatrixXd hess(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = d2(i, j);
      for (int k = 0; k < n; ++k) s -= Gamma(k, i, j) * du(k);
      hess(i, j) = s;
    }
  const double lap = (gi.cwiseProduct(hess)).sum();
  const double grad2 = du.dot(gi * du);
  const Eigen::MatrixXd S = P.source(x0.data());
  return hess + ((1.0 - P.t) / (n - 2.0) * lap + P.b * grad2) * g + P.a * du * du.transpose() + S;
}

// (sigma_k(g^{-1} W) / C(n, k))^{1/k}.
inline double direct_F(const DirectProblem& P, const std::vector<double>& u, std::size_t p, int k) {
  const auto base = torus_multi(P.n, P.m, p);
  std::vector<double> x(static_cast<std::size_t>(P.n));
  for (int a = 0; a < P.n; ++a) x[static_cast<std::size_t>(a)] = 2.0 * M_PI / P.m * base[static_cast<std::size_t>(a)];
  const Eigen::MatrixXd g = P.metric(x.data());
  const Eigen::MatrixXd A = g.inverse() * direct_W(P, u, p);
  return std::pow(principal_minor_sum(A, k) / binomial(P.n, k), 1.0 / k);
}

}  // namespace oracle
