#pragma once

// Independent references for the symmetric-function module: brute-force
// subset enumeration and central finite differences.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "sigmak/symfunc/elementary.hpp"

namespace oracle {

/// sigma_k by summing the products over all k-subsets (bitmask enumeration).
inline double sigma_enum(const std::vector<double>& lam, int k) {
  const int n = static_cast<int>(lam.size());
  if (k == 0) return 1.0;
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    double p = 1.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) p *= lam[static_cast<std::size_t>(i)];
    total += p;
  }
  return total;
}

/// Same enumeration with |lambda|: the magnitude scale of the alternating sum.
inline double sigma_abs_enum(const std::vector<double>& lam, int k) {
  std::vector<double> a(lam.size());
  for (std::size_t i = 0; i < lam.size(); ++i) a[i] = std::abs(lam[i]);
  return sigma_enum(a, k);
}

/// Gamma_k by enumeration: every sigma_j, j <= k, strictly positive.
inline bool cone_enum(const std::vector<double>& lam, int k) {
  for (int j = 1; j <= k; ++j)
    if (!(sigma_enum(lam, j) > 0.0)) return false;
  return true;
}

inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x0 = x[i];
    x[i] = x0 + h;
    const double fp = f(x);
    x[i] = x0 - h;
    const double fm = f(x);
    x[i] = x0;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Random points of Gamma_k: scaled uniform entries, rejected until admissible.
/// `interior` keeps a cone margin so that floating-point identities are well conditioned.
inline std::vector<double> random_cone_point(std::mt19937_64& rng, int n, int k, double interior = 0.05) {
  std::uniform_real_distribution<double> entry(-1.0, 2.0);
  std::uniform_real_distribution<double> log_scale(-2.0, 2.0);
  for (;;) {
    std::vector<double> lam(static_cast<std::size_t>(n));
    const double s = std::pow(10.0, log_scale(rng));
    double m = 0.0;
    for (auto& x : lam) {
      x = s * entry(rng);
      m = std::max(m, std::abs(x));
    }
    if (!cone_enum(lam, k)) continue;
    if (sigmak::symfunc::cone_distance(lam, {k, sigmak::symfunc::ConeSign::positive}) < interior * m) continue;
    return lam;
  }
}

}  // namespace oracle
