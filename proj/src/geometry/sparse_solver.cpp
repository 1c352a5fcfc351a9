#include "sigmak/geometry/sparse_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "sigmak/common/errors.hpp"

namespace sigmak::geometry {

namespace {

struct Box {
  std::array<int, kMaxDim> lo{}, hi{};  // half-open
};

void emit_box(const ChartGrid& grid, const Box& b, std::vector<std::size_t>& out) {
  const int n = grid.dim();
  Multi m{};
  for (int a = 0; a < n; ++a) {
    if (b.hi[static_cast<std::size_t>(a)] <= b.lo[static_cast<std::size_t>(a)]) return;
    m[static_cast<std::size_t>(a)] = b.lo[static_cast<std::size_t>(a)];
  }
  for (;;) {
    out.push_back(grid.flat(m));
    int a = 0;
    for (; a < n; ++a) {
      auto& i = m[static_cast<std::size_t>(a)];
      if (++i < b.hi[static_cast<std::size_t>(a)]) break;
      i = b.lo[static_cast<std::size_t>(a)];
    }
    if (a == n) return;
  }
}

void dissect(const ChartGrid& grid, const Box& b, int leaf, std::vector<std::size_t>& out) {
  int axis = 0, len = 0;
  for (int a = 0; a < grid.dim(); ++a) {
    const int l = b.hi[static_cast<std::size_t>(a)] - b.lo[static_cast<std::size_t>(a)];
    if (l <= 0) return;
    if (l > len) {
      len = l;
      axis = a;
    }
  }
  if (len <= leaf) {
    emit_box(grid, b, out);
    return;
  }
  const auto s = static_cast<std::size_t>(axis);
  const int mid = (b.lo[s] + b.hi[s]) / 2;
  Box left = b, right = b, sep = b;
  left.hi[s] = mid;
  right.lo[s] = mid + 1;
  sep.lo[s] = mid;
  sep.hi[s] = mid + 1;
  dissect(grid, left, leaf, out);
  dissect(grid, right, leaf, out);
  emit_box(grid, sep, out);
}

}  // namespace

std::vector<std::size_t> nested_dissection_order(const ChartGrid& grid, int leaf) {
  Box b;
  for (int a = 0; a < grid.dim(); ++a) b.hi[static_cast<std::size_t>(a)] = grid.extent(a);
  std::vector<std::size_t> out;
  out.reserve(grid.size());
  dissect(grid, b, std::max(leaf, 1), out);
  return out;
}

struct SparseDirectSolver::Impl {
  Ordering ordering;
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm;  // unknown k -> position
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::NaturalOrdering<int>> natural;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> colamd;
  bool analysed = false;
  double condition = 0.0;
};

SparseDirectSolver::SparseDirectSolver(const ChartGrid& grid, std::vector<std::size_t> unknown_points, Ordering ordering)
    : impl_(std::make_unique<Impl>()) {
  impl_->ordering = ordering;
  const std::size_t m = unknown_points.size();
  std::vector<int> slot(grid.size(), -1);
  for (std::size_t k = 0; k < m; ++k) slot[unknown_points[k]] = static_cast<int>(k);
  impl_->perm.resize(static_cast<int>(m));
  int next = 0;
  for (std::size_t q : nested_dissection_order(grid)) {
    const int k = slot[q];
    if (k >= 0) impl_->perm.indices()[k] = next++;
  }
  require(next == static_cast<int>(m), ErrorKind::argument, "unknown points are not distinct grid points");
}

SparseDirectSolver::~SparseDirectSolver() = default;

void SparseDirectSolver::factorize(const Eigen::SparseMatrix<double>& A) {
  require(A.rows() == A.cols() && A.rows() == impl_->perm.size(), ErrorKind::argument, "matrix size does not match the unknowns");
  std::vector<char> row_used(static_cast<std::size_t>(A.rows()), 0);
  for (int k = 0; k < A.outerSize(); ++k) {
    bool col_used = false;
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      if (it.value() != 0.0) {
        row_used[static_cast<std::size_t>(it.row())] = 1;
        col_used = true;
      }
    if (!col_used) fail(ErrorKind::numerical, "matrix is structurally singular (empty column " + std::to_string(k) + ")");
  }
  for (std::size_t r = 0; r < row_used.size(); ++r)
    if (!row_used[r]) fail(ErrorKind::numerical, "matrix is structurally singular (empty row " + std::to_string(r) + ")");
  impl_->analysed = false;
  auto check = [](auto& lu) {
    if (lu.info() != Eigen::Success) fail(ErrorKind::numerical, "sparse LU factorisation failed: " + lu.lastErrorMessage());
  };
  if (impl_->ordering == Ordering::colamd) {
    impl_->colamd.analyzePattern(A);
    impl_->colamd.factorize(A);
    check(impl_->colamd);
  } else {
    Eigen::SparseMatrix<double> PA = impl_->perm * A;
    Eigen::SparseMatrix<double> P = PA * impl_->perm.transpose();
    P.makeCompressed();
    impl_->natural.analyzePattern(P);
    impl_->natural.factorize(P);
    check(impl_->natural);
  }
  impl_->analysed = true;

  // Hager-style probe: ||A||_inf ||A^{-1} b||_inf / ||b||_inf with a fixed sign pattern.
  Eigen::VectorXd b(A.rows());
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    b(i) = (state & 1U) ? 1.0 : -1.0;
  }
  double norm_a = 0.0;
  {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(A.rows());
    for (int k = 0; k < A.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) rows(it.row()) += std::abs(it.value());
    norm_a = rows.maxCoeff();
  }
  const Eigen::VectorXd x = solve(b);
  impl_->condition = norm_a * x.cwiseAbs().maxCoeff();
  if (!std::isfinite(impl_->condition) || impl_->condition > kSingularCondition) {
    impl_->analysed = false;
    fail(ErrorKind::numerical, "matrix is numerically singular (condition estimate " + std::to_string(impl_->condition) + ")");
  }
}

double SparseDirectSolver::condition_estimate() const { return impl_->condition; }

Eigen::VectorXd SparseDirectSolver::solve(const Eigen::VectorXd& b) const {
  require(impl_->analysed, ErrorKind::numerical, "solve called before factorize");
  if (impl_->ordering == Ordering::colamd) return impl_->colamd.solve(b);
  const Eigen::VectorXd pb = impl_->perm * b;
  const Eigen::VectorXd y = impl_->natural.solve(pb);
  return impl_->perm.inverse() * y;
}

}  // namespace sigmak::geometry
