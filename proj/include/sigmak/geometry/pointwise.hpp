#pragma once

// Fixed-dimension point kernels shared by the geometry, equation and
// estimate modules. Everything here works on one grid point at a time.

#include <array>
#include <cstddef>
#include <type_traits>

#include <Eigen/Dense>

#include "sigmak/common/errors.hpp"
#include "sigmak/geometry/fields.hpp"
#include "sigmak/geometry/stencil.hpp"

namespace sigmak::geometry {

template <class F>
decltype(auto) dispatch_dim(int n, F&& f) {
  switch (n) {
    case 3: return f(std::integral_constant<int, 3>{});
    case 4: return f(std::integral_constant<int, 4>{});
    case 5: return f(std::integral_constant<int, 5>{});
    case 6: return f(std::integral_constant<int, 6>{});
    default: fail(ErrorKind::dimension, "dimension " + std::to_string(n) + " outside [3, 6]");
  }
}

template <int D>
using Tensor3 = std::array<Mat<D>, D>;  // T[k](i, j)
template <int D>
using Tensor4 = std::array<std::array<Mat<D>, D>, D>;

/// g, g^{-1} and the first two coordinate derivatives of g at one point.
template <int D>
struct MetricJet {
  Mat<D> g, gi;
  Tensor3<D> dg;   // dg[a] = d_a g
  Tensor4<D> ddg;  // ddg[a][b] = d_a d_b g
};

namespace detail {

// Small memo of metric values at stencil points; a jet touches each neighbour several times.
template <int D>
class MetricMemo {
 public:
  explicit MetricMemo(const MetricField& g) : g_(g) {}
  const Mat<D>& operator()(std::size_t q) {
    for (int i = 0; i < count_; ++i)
      if (index_[static_cast<std::size_t>(i)] == q) return value_[static_cast<std::size_t>(i)];
    if (count_ == kCap) fail(ErrorKind::numerical, "metric memo overflow");
    index_[static_cast<std::size_t>(count_)] = q;
    value_[static_cast<std::size_t>(count_)] = g_.template at<D>(q);
    return value_[static_cast<std::size_t>(count_++)];
  }

 private:
  static constexpr int kCap = 160;
  const MetricField& g_;
  std::array<std::size_t, kCap> index_{};
  std::array<Mat<D>, kCap> value_;
  int count_ = 0;
};

}  // namespace detail

namespace detail {

inline bool all_central(const ChartGrid& grid, const Multi& m) {
  for (int a = 0; a < grid.dim(); ++a) {
    const int i = m[static_cast<std::size_t>(a)];
    if (!grid.periodic(a) && (i == 0 || i == grid.extent(a) - 1)) return false;
  }
  return true;
}

inline std::size_t shifted(const ChartGrid& grid, const Multi& m, std::size_t p, int axis, int s) {
  const int e = grid.extent(axis);
  const int i = m[static_cast<std::size_t>(axis)];
  const int j = ((i + s) % e + e) % e;
  return p + (static_cast<std::size_t>(j) - static_cast<std::size_t>(i)) * grid.stride(axis);
}

// Interior (or periodic) fast path: plain central differences on the 1 + 2D + 2D(D-1) point star.
template <int D>
void central_jet(const MetricField& metric, const Multi& m, std::size_t p, MetricJet<D>& jet) {
  const ChartGrid& grid = metric.grid();
  const double h = grid.h();
  const double i2h = 0.5 / h, ih2 = 1.0 / (h * h), i4h2 = 0.25 / (h * h);
  std::array<int, D> up, dn;        // neighbour positions along each axis
  std::array<std::ptrdiff_t, D> su, sd;  // flat index offsets
  double x[kMaxDim];
  for (int a = 0; a < D; ++a) {
    const auto sa = static_cast<std::size_t>(a);
    const int e = grid.extent(a);
    const int i = m[sa];
    up[sa] = (i + 1) % e;
    dn[sa] = (i + e - 1) % e;
    su[sa] = (static_cast<std::ptrdiff_t>(up[sa]) - i) * static_cast<std::ptrdiff_t>(grid.stride(a));
    sd[sa] = (static_cast<std::ptrdiff_t>(dn[sa]) - i) * static_cast<std::ptrdiff_t>(grid.stride(a));
    x[a] = grid.coord(a, i);
  }
  const auto at = [&](std::ptrdiff_t offset) {
    return metric.template at_coords<D>(x, static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) + offset));
  };
  jet.g = at(0);
  for (int a = 0; a < D; ++a) {
    const auto sa = static_cast<std::size_t>(a);
    const double xa = x[a];
    x[a] = grid.coord(a, up[sa]);
    const Mat<D> gp = at(su[sa]);
    x[a] = grid.coord(a, dn[sa]);
    const Mat<D> gm = at(sd[sa]);
    x[a] = xa;
    jet.dg[sa] = (gp - gm) * i2h;
    jet.ddg[sa][sa] = (gp - 2.0 * jet.g + gm) * ih2;
  }
  for (int a = 0; a < D; ++a) {
    const auto sa = static_cast<std::size_t>(a);
    const double xa = x[a];
    for (int b = a + 1; b < D; ++b) {
      const auto sb = static_cast<std::size_t>(b);
      const double xb = x[b];
      x[a] = grid.coord(a, up[sa]);
      x[b] = grid.coord(b, up[sb]);
      Mat<D> v = at(su[sa] + su[sb]);
      x[b] = grid.coord(b, dn[sb]);
      v -= at(su[sa] + sd[sb]);
      x[a] = grid.coord(a, dn[sa]);
      v += at(sd[sa] + sd[sb]);
      x[b] = grid.coord(b, up[sb]);
      v -= at(sd[sa] + su[sb]);
      x[a] = xa;
      x[b] = xb;
      jet.ddg[sa][sb] = jet.ddg[sb][sa] = v * i4h2;
    }
  }
}

}  // namespace detail

template <int D>
void finish_jet(MetricJet<D>& jet, std::size_t p) {
  Eigen::LLT<Mat<D>> llt(jet.g);
  if (llt.info() != Eigen::Success || !(jet.g.diagonal().minCoeff() > 0.0))
    fail(ErrorKind::metric, "metric is not positive definite at point " + std::to_string(p));
  if constexpr (D <= 4)
    jet.gi = jet.g.inverse();
  else
    jet.gi = llt.solve(Mat<D>::Identity());
}

template <int D>
MetricJet<D> metric_jet(const MetricField& metric, std::size_t p) {
  const ChartGrid& grid = metric.grid();
  const Multi m = grid.multi(p);
  MetricJet<D> jet;
  if (detail::all_central(grid, m)) {
    detail::central_jet<D>(metric, m, p, jet);
  } else {
    detail::MetricMemo<D> memo(metric);
    jet.g = memo(p);
    for (int a = 0; a < D; ++a) {
      Mat<D> acc = Mat<D>::Zero();
      for (const auto& t : first_derivative(grid, m, a, FieldClass::geometric)) acc += t.weight * memo(t.index);
      jet.dg[static_cast<std::size_t>(a)] = acc;
      acc.setZero();
      for (const auto& t : second_derivative(grid, m, a, FieldClass::geometric)) acc += t.weight * memo(t.index);
      jet.ddg[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = acc;
      for (int b = a + 1; b < D; ++b) {
        acc.setZero();
        for (const auto& t : mixed_derivative(grid, m, a, b, FieldClass::geometric)) acc += t.weight * memo(t.index);
        jet.ddg[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = acc;
        jet.ddg[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = acc;
      }
    }
  }
  finish_jet(jet, p);
  return jet;
}

/// Christoffel symbols G[k](i, j) = Gamma^k_ij and, optionally, dG[m][k](i, j) = d_m Gamma^k_ij.
/// The derivatives come from the metric jet by the chain rule, so no accuracy is lost.
template <int D>
struct Connection {
  Tensor3<D> G;
  Tensor4<D> dG;
};

template <int D>
Connection<D> connection(const MetricJet<D>& jet, bool with_derivative) {
  Connection<D> c;
  Tensor3<D> first;  // first[l](i, j) = Gamma_{l, ij}
  for (int l = 0; l < D; ++l)
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j)
        first[static_cast<std::size_t>(l)](i, j) =
            0.5 * (jet.dg[static_cast<std::size_t>(i)](j, l) + jet.dg[static_cast<std::size_t>(j)](i, l) -
                   jet.dg[static_cast<std::size_t>(l)](i, j));
  for (int k = 0; k < D; ++k) {
    Mat<D> acc = Mat<D>::Zero();
    for (int l = 0; l < D; ++l) acc += jet.gi(k, l) * first[static_cast<std::size_t>(l)];
    c.G[static_cast<std::size_t>(k)] = acc;
  }
  if (!with_derivative) return c;
  for (int m = 0; m < D; ++m) {
    const auto sm = static_cast<std::size_t>(m);
    const Mat<D> dgi = -jet.gi * jet.dg[sm] * jet.gi;
    Tensor3<D> dfirst;
    for (int l = 0; l < D; ++l)
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
          dfirst[static_cast<std::size_t>(l)](i, j) =
              0.5 * (jet.ddg[sm][static_cast<std::size_t>(i)](j, l) + jet.ddg[sm][static_cast<std::size_t>(j)](i, l) -
                     jet.ddg[sm][static_cast<std::size_t>(l)](i, j));
    for (int k = 0; k < D; ++k) {
      Mat<D> acc = Mat<D>::Zero();
      for (int l = 0; l < D; ++l)
        acc += dgi(k, l) * first[static_cast<std::size_t>(l)] + jet.gi(k, l) * dfirst[static_cast<std::size_t>(l)];
      c.dG[sm][static_cast<std::size_t>(k)] = acc;
    }
  }
  return c;
}

/// R^r_{s m v} = d_m G^r_{vs} - d_v G^r_{ms} + G^r_{ml} G^l_{vs} - G^r_{vl} G^l_{ms}.
template <int D>
double riemann_component(const Connection<D>& c, int r, int s, int m, int v) {
  const auto R = static_cast<std::size_t>(r);
  double val = c.dG[static_cast<std::size_t>(m)][R](v, s) - c.dG[static_cast<std::size_t>(v)][R](m, s);
  for (int l = 0; l < D; ++l)
    val += c.G[R](m, l) * c.G[static_cast<std::size_t>(l)](v, s) - c.G[R](v, l) * c.G[static_cast<std::size_t>(l)](m, s);
  return val;
}

/// Ric_{sv} = R^r_{s r v}.
template <int D>
Mat<D> ricci_tensor(const Connection<D>& c) {
  Mat<D> ric;
  for (int s = 0; s < D; ++s)
    for (int v = s; v < D; ++v) {
      double acc = 0.0;
      for (int r = 0; r < D; ++r) acc += riemann_component<D>(c, r, s, r, v);
      ric(s, v) = acc;
    }
  for (int s = 0; s < D; ++s)
    for (int v = 0; v < s; ++v) ric(s, v) = ric(v, s);
  return ric;
}

/// Ricci straight from the metric jet, contracting before differentiating:
///   d_r Gamma^r_{vs} - d_v d_s log sqrt(det g) + Gamma^r_{rl} Gamma^l_{vs} - Gamma^r_{vl} Gamma^l_{rs}.
/// Agrees with ricci_tensor(connection(jet, true)) up to rounding at O(D^4) instead of O(D^5) cost.
template <int D>
Mat<D> ricci_from_jet(const MetricJet<D>& jet) {
  const Connection<D> c = connection<D>(jet, false);
  std::array<Mat<D>, D> gdg;  // g^{-1} d_a g
  for (int a = 0; a < D; ++a) gdg[static_cast<std::size_t>(a)] = jet.gi * jet.dg[static_cast<std::size_t>(a)];
  Vec<D> w = Vec<D>::Zero();  // w_l = sum_r d_r g^{rl}
  for (int r = 0; r < D; ++r) w -= (gdg[static_cast<std::size_t>(r)] * jet.gi).row(r).transpose();
  Vec<D> trace_g;  // sum_r Gamma^r_{rl}
  for (int l = 0; l < D; ++l) {
    double acc = 0.0;
    for (int r = 0; r < D; ++r) acc += c.G[static_cast<std::size_t>(r)](r, l);
    trace_g(l) = acc;
  }
  Mat<D> ric;
  for (int v = 0; v < D; ++v) {
    for (int s = v; s < D; ++s) {
      double t1 = 0.0;
      for (int l = 0; l < D; ++l) {
        double first = 0.5 * (jet.dg[static_cast<std::size_t>(v)](s, l) + jet.dg[static_cast<std::size_t>(s)](v, l) -
                              jet.dg[static_cast<std::size_t>(l)](v, s));
        t1 += w(l) * first;
        for (int r = 0; r < D; ++r)
          t1 += 0.5 * jet.gi(r, l) *
                (jet.ddg[static_cast<std::size_t>(r)][static_cast<std::size_t>(v)](s, l) +
                 jet.ddg[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)](v, l) -
                 jet.ddg[static_cast<std::size_t>(r)][static_cast<std::size_t>(l)](v, s));
      }
      const double t2 = 0.5 * (jet.gi.cwiseProduct(jet.ddg[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)]).sum() -
                               gdg[static_cast<std::size_t>(v)].cwiseProduct(gdg[static_cast<std::size_t>(s)].transpose()).sum());
      double quad = 0.0;
      for (int l = 0; l < D; ++l) {
        quad += trace_g(l) * c.G[static_cast<std::size_t>(l)](v, s);
        for (int r = 0; r < D; ++r) quad -= c.G[static_cast<std::size_t>(r)](v, l) * c.G[static_cast<std::size_t>(l)](r, s);
      }
      ric(v, s) = ric(s, v) = t1 - t2 + quad;
    }
  }
  return ric;
}

/// (Ric - t R / (2(n-1)) g) / (n-2).
template <int D>
Mat<D> modified_schouten_of(const Mat<D>& ric, double R, const Mat<D>& g, double t) {
  return (ric - (t * R / (2.0 * (D - 1))) * g) / static_cast<double>(D - 2);
}

template <int D>
Mat<D> modified_schouten_at(const MetricField& metric, std::size_t p, double t) {
  const MetricJet<D> jet = metric_jet<D>(metric, p);
  const Mat<D> ric = ricci_from_jet<D>(jet);
  const double R = (jet.gi.cwiseProduct(ric)).sum();
  return modified_schouten_of<D>(ric, R, jet.g, t);
}

/// Value, gradient and coordinate Hessian of a scalar grid function.
template <int D>
struct ScalarJet {
  double v;
  Vec<D> d;
  Mat<D> dd;
};

template <int D>
ScalarJet<D> scalar_jet(const ChartGrid& grid, const double* values, std::size_t p, FieldClass cls) {
  const Multi m = grid.multi(p);
  ScalarJet<D> j;
  j.v = values[p];
  if (detail::all_central(grid, m)) {
    const double h = grid.h();
    std::array<std::ptrdiff_t, D> su, sd;
    for (int a = 0; a < D; ++a) {
      const auto sa = static_cast<std::size_t>(a);
      const int e = grid.extent(a);
      const int i = m[sa];
      su[sa] = (static_cast<std::ptrdiff_t>((i + 1) % e) - i) * static_cast<std::ptrdiff_t>(grid.stride(a));
      sd[sa] = (static_cast<std::ptrdiff_t>((i + e - 1) % e) - i) * static_cast<std::ptrdiff_t>(grid.stride(a));
    }
    const double* c = values + p;
    for (int a = 0; a < D; ++a) {
      const auto sa = static_cast<std::size_t>(a);
      j.d(a) = (c[su[sa]] - c[sd[sa]]) * (0.5 / h);
      j.dd(a, a) = (c[su[sa]] - 2.0 * c[0] + c[sd[sa]]) / (h * h);
      for (int b = a + 1; b < D; ++b) {
        const auto sb = static_cast<std::size_t>(b);
        j.dd(a, b) = j.dd(b, a) =
            (c[su[sa] + su[sb]] - c[su[sa] + sd[sb]] - c[sd[sa] + su[sb]] + c[sd[sa] + sd[sb]]) * (0.25 / (h * h));
      }
    }
    return j;
  }
  for (int a = 0; a < D; ++a) {
    j.d(a) = first_derivative(grid, m, a, cls).apply(values);
    j.dd(a, a) = second_derivative(grid, m, a, cls).apply(values);
    for (int b = a + 1; b < D; ++b) j.dd(a, b) = j.dd(b, a) = mixed_derivative(grid, m, a, b, cls).apply(values);
  }
  return j;
}

/// Covariant Hessian d_ij u - Gamma^k_ij d_k u.
template <int D>
Mat<D> covariant_hessian(const ScalarJet<D>& u, const Tensor3<D>& G) {
  Mat<D> h = u.dd;
  for (int k = 0; k < D; ++k) h -= u.d(k) * G[static_cast<std::size_t>(k)];
  return h;
}

}  // namespace sigmak::geometry
