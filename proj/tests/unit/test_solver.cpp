#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sigmak/geometry/curvature.hpp"
#include "sigmak/solver/continuation.hpp"
#include "sigmak/solver/jacobian.hpp"
#include "sigmak/solver/newton.hpp"
#include "support.hpp"

using namespace sigmak;
using namespace sigmak::equation;
using namespace sigmak::geometry;
using namespace sigmak::solver;
using testing::kind_of;

namespace {

template <class Fn>
ScalarField sample(const ChartGrid& grid, Fn&& fn) {
  ScalarField s(grid, ScalarRole::u, 0.0);
  double x[kMaxDim];
  for (std::size_t p = 0; p < grid.size(); ++p) {
    grid.coords(p, x);
    s[p] = fn(x);
  }
  return s;
}

Tensor2Field multiple_of(const MetricField& g, double c) {
  Tensor2Field S(g.grid(), TensorRole::S);
  for (std::size_t p = 0; p < g.grid().size(); ++p) S.set(p, c * g.matrix(p));
  return S;
}

ProblemSpec make_problem(Branch br, double t, double a, double b, Tensor2Field S, symfunc::OperatorSpec op,
                         RhsModel rhs) {
  return ProblemSpec{br, t, ScalarParameter::of(a), ScalarParameter::of(b), std::move(S), op, std::move(rhs)};
}

// Cosine modes with zero normal derivative on the faces of [-r, r]^n.
ScalarField neumann_bump(const ChartGrid& grid, double r, double amp) {
  return sample(grid, [&](const double* x) {
    const double k = M_PI / r;
    return amp * (std::cos(k * x[0]) * std::cos(k * x[1]) + 0.5 * std::cos(k * x[2]));
  });
}

}  // namespace

TEST_CASE("linear problem on the torus converges in one step") {
  const auto grid = ChartGrid::periodic_torus(3, 9);
  const MetricField g(grid, make_periodic_perturbed_metric(0.2));
  const double c = 1.5;
  const auto spec = make_problem(Branch::W, 0.5, 0.0, 0.0, multiple_of(g, c), symfunc::OperatorSpec::sigma_root(3, 1),
                                 RhsModel::exp_decay(ScalarParameter::of(c), 0));
  const auto u0 = sample(grid, [](const double* x) { return 0.1 * std::sin(x[0]) * std::cos(x[1]) + 0.05 * std::cos(x[2]); });
  const auto res = newton_solve(u0, g, spec);
  CHECK(res.report.status == NewtonStatus::converged);
  CHECK(res.report.iterations == 1);
  CHECK(res.report.pinned_point == static_cast<long>(grid.size() / 2));
  const double pinned = u0[grid.size() / 2];
  for (double v : res.u.values) CHECK(v == doctest::Approx(pinned).epsilon(1e-9).scale(1.0));
}

TEST_CASE("Newton recovers the zero solution on the sphere chart") {
  const double r = 0.5;
  const auto grid = ChartGrid::sphere_chart(3, 17, r);
  const MetricField g(grid, make_round_sphere_metric());
  const nlohmann::json j = {{"branch", "W"},
                            {"t", 1.0},
                            {"a", 1.0},
                            {"b", -0.5},
                            {"S", {{"kind", "metric_multiple"}, {"c", 0.5}}},
                            {"operator", {{"k", 2}}},
                            {"rhs", {{"kind", "exp_decay"}, {"k", 1}, {"psi", "match_zero"}}}};
  const auto spec = problem_from_json(j, g);
  const auto u0 = neumann_bump(grid, r, 1e-2);
  const auto res = newton_solve(u0, g, spec);
  REQUIRE(res.report.status == NewtonStatus::converged);
  CHECK(res.report.iterations <= 8);
  CHECK(res.report.pinned_point == -1);
  double umax = 0.0;
  for (double v : res.u.values) umax = std::max(umax, std::abs(v));
  CHECK(umax < 1e-9);
  const auto ratios = quadratic_ratios(res.report);
  REQUIRE(!ratios.empty());
  for (double q : ratios) CHECK(q < 10.0);
  for (std::size_t i = 1; i < res.report.history.size(); ++i)
    CHECK(res.report.history[i].residual < res.report.history[i - 1].residual);

  std::ostringstream os;
  write_log_csv(os, res.report);
  CHECK(os.str().rfind("iteration,residual_max,step,min_cone_distance\n", 0) == 0);
}

TEST_CASE("Newton on a half-ball with Dirichlet outer faces") {
  const auto grid = ChartGrid::half_ball(3, 9, 1.0);
  const MetricField g(grid, make_fermi_product_metric(0.1));
  const nlohmann::json j = {{"branch", "W"},
                            {"t", 0.0},
                            {"S", {{"kind", "metric_multiple"}, {"c", 1.0}}},
                            {"operator", {{"k", 2}}},
                            {"rhs", {{"kind", "exp_decay"}, {"k", 1}, {"psi", "match_zero"}}}};
  const auto spec = problem_from_json(j, g);
  const auto u0 = sample(grid, [](const double* x) {
    return 0.02 * std::cos(0.5 * M_PI * x[0]) * std::cos(0.5 * M_PI * x[1]) * std::cos(0.5 * M_PI * x[2]);
  });
  const auto res = newton_solve(u0, g, spec);
  REQUIRE(res.report.status == NewtonStatus::converged);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (grid.is_dirichlet(p))
      CHECK(res.u[p] == u0[p]);
    else
      CHECK(std::abs(res.u[p]) < 1e-9);
  }
}

TEST_CASE("Jacobian against finite differences of the residual") {
  const auto grid = ChartGrid::periodic_torus(3, 9);
  const MetricField g(grid, make_periodic_perturbed_metric(0.25));
  const GeometryCache geo(g);
  for (int k = 1; k <= 3; ++k) {
    const auto spec = make_problem(Branch::W, 0.0, 1.0, -0.5, multiple_of(g, 2.0), symfunc::OperatorSpec::sigma_root(3, k),
                                   RhsModel::exp_decay(ScalarParameter::of(1.0), 1));
    const auto u = sample(grid, [](const double* x) { return 0.1 * std::sin(x[0] + 2.0 * x[1]) + 0.05 * std::cos(x[2]); });
    const auto v = sample(grid, [](const double* x) { return std::cos(x[0]) * std::sin(x[2]) + 0.3 * std::sin(x[1]); });
    const auto unknowns = make_unknowns(grid);
    const auto sys = assemble_system(u, geo, spec, unknowns);
    Eigen::VectorXd dv(static_cast<Eigen::Index>(unknowns.size()));
    for (std::size_t q = 0; q < unknowns.size(); ++q) dv(static_cast<Eigen::Index>(q)) = v[unknowns.points[q]];
    const Eigen::VectorXd Jv = sys.J * dv;

    const double eps = 1e-6;
    ScalarField up = u, um = u;
    for (std::size_t p = 0; p < grid.size(); ++p) {
      up[p] += eps * v[p];
      um[p] -= eps * v[p];
    }
    const Eigen::VectorXd fd = (assemble_system(up, geo, spec, unknowns).r - assemble_system(um, geo, spec, unknowns).r) / (2.0 * eps);
    CAPTURE(k);
    CHECK((Jv - fd).lpNorm<Eigen::Infinity>() <= 1e-6 * fd.lpNorm<Eigen::Infinity>());
  }
}

TEST_CASE("Neumann Jacobian is symmetric in the trapezoid inner product") {
  const auto grid = ChartGrid::sphere_chart(3, 7, 0.5);
  const MetricField g(grid, make_flat_metric());
  const GeometryCache geo(g);
  const auto spec = make_problem(Branch::W, 0.0, 0.0, 0.0, multiple_of(g, 1.0), symfunc::OperatorSpec::sigma_root(3, 1),
                                 RhsModel::exp_decay(ScalarParameter::of(1.0), 1));
  const ScalarField zero(grid, ScalarRole::u, 0.0);
  const auto unknowns = make_unknowns(grid);
  REQUIRE(unknowns.size() == grid.size());
  const Eigen::MatrixXd J(assemble_system(zero, geo, spec, unknowns).J);
  Eigen::VectorXd w(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Multi m = grid.multi(p);
    double wp = 1.0;
    for (int a = 0; a < 3; ++a) {
      const int i = m[static_cast<std::size_t>(a)];
      if (i == 0 || i == grid.extent(a) - 1) wp *= 0.5;
    }
    w(static_cast<Eigen::Index>(p)) = wp;
  }
  const Eigen::MatrixXd WJ = w.asDiagonal() * J;
  CHECK((WJ - WJ.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * WJ.cwiseAbs().maxCoeff());
  CHECK((J - J.transpose()).cwiseAbs().maxCoeff() > 1.0);
}

TEST_CASE("Newton failure modes") {
  const double r = 0.5;
  const auto grid = ChartGrid::sphere_chart(3, 9, r);
  const MetricField g(grid, make_round_sphere_metric());
  const auto op = symfunc::OperatorSpec::sigma_root(3, 2);

  SUBCASE("inadmissible initial guess") {
    const auto spec = make_problem(Branch::W, 1.0, 1.0, -0.5, multiple_of(g, -1.0), op,
                                   RhsModel::exp_decay(ScalarParameter::of(1.0), 1));
    const ScalarField zero(grid, ScalarRole::u, 0.0);
    CHECK(kind_of([&] { newton_solve(zero, g, spec); }) == ErrorKind::precondition);
  }
  SUBCASE("no admissible step") {
    const auto spec = make_problem(Branch::W, 1.0, 1.0, -0.5, multiple_of(g, 0.5), op,
                                   RhsModel::exp_decay(ScalarParameter::of(1.0), 1));
    SolverConfig cfg;
    cfg.admissibility_margin = 1e3;
    CHECK(kind_of([&] { newton_solve(neumann_bump(grid, r, 1e-2), g, spec, cfg); }) == ErrorKind::safeguard);
  }
  SUBCASE("u-independent data on a Neumann chart is singular") {
    const auto flat = MetricField(grid, make_flat_metric());
    const auto spec = make_problem(Branch::W, 1.0, 0.0, 0.0, multiple_of(flat, 1.0), symfunc::OperatorSpec::sigma_root(3, 1),
                                   RhsModel::exp_decay(ScalarParameter::of(1.0), 0));
    const auto res = newton_solve(neumann_bump(grid, r, 1e-2), flat, spec);
    CHECK(res.report.status == NewtonStatus::singular);
    CHECK(!res.report.message.empty());
  }
  SUBCASE("iteration cap") {
    const auto spec = make_problem(Branch::W, 1.0, 1.0, -0.5, multiple_of(g, 0.5), op,
                                   RhsModel::exp_decay(ScalarParameter::of(0.5), 1));
    SolverConfig cfg;
    cfg.max_newton_iters = 1;
    const auto res = newton_solve(neumann_bump(grid, r, 1e-2), g, spec, cfg);
    CHECK(res.report.status == NewtonStatus::max_iterations);
    CHECK(res.report.iterations == 1);
  }
  SUBCASE("configuration") {
    SolverConfig cfg;
    cfg.shrink = 1.5;
    CHECK(kind_of([&] { validate(cfg); }) == ErrorKind::validation);
    nlohmann::json j;
    to_json(j, SolverConfig{});
    const auto back = solver_config_from_json(j);
    CHECK(back.max_newton_iters == 30);
    CHECK(back.residual_tol == 1e-10);
  }
}

TEST_CASE("serial and parallel Newton agree bitwise") {
  const double r = 0.5;
  const auto grid = ChartGrid::sphere_chart(3, 9, r);
  const MetricField g(grid, make_round_sphere_metric());
  const auto spec = make_problem(Branch::W, 0.5, 1.0, -0.75, multiple_of(g, 1.0), symfunc::OperatorSpec::quotient(3, 3, 1),
                                 RhsModel::exp_decay(ScalarParameter::of(1.0), 1));
  const auto u0 = neumann_bump(grid, r, 1e-2);
  const auto a = newton_solve(u0, g, spec, {}, Exec::serial);
  const auto b = newton_solve(u0, g, spec, {}, Exec::parallel);
  CHECK(a.u.values == b.u.values);
  CHECK(a.report.iterations == b.report.iterations);
}

TEST_CASE("continuation in t on the round sphere") {
  const int n = 3;
  const auto grid = ChartGrid::sphere_chart(n, 9, 0.5);
  const MetricField g(grid, make_round_sphere_metric());
  const auto op = symfunc::OperatorSpec::sigma_root(n, 2);
  // Constant-curvature path: A^t = coeff(t) g, so u = log(coeff(t) / coeff(t0)) / 2.
  auto coeff = [&](double t) { return ((n - 1.0) - t * n / 2.0) / (n - 2.0); };

  SUBCASE("W branch from t = 0 to 1") {
    CHECK(choose_start(g, Branch::W) == 0.0);
    const auto res = continuation_in_t(g, op);
    REQUIRE(res.completed);
    CHECK(res.t_current == 1.0);
    CHECK(res.path.front().t == 0.0);
    CHECK(res.path.back().t == 1.0);
    const double expect = 0.5 * std::log(coeff(1.0) / coeff(0.0));
    for (double v : res.u.values) CHECK(v == doctest::Approx(expect).epsilon(0.02));
    for (const auto& node : res.path) {
      CHECK(node.min_cone_distance > 0.0);
      CHECK(node.residual <= 1e-10);
    }
    std::ostringstream os;
    write_path_csv(os, res);
    CHECK(os.str().find("\n") != std::string::npos);
  }
  SUBCASE("V branch down to n - 1 + margin") {
    const double t0 = choose_start(g, Branch::V);
    CHECK(t0 == 4.0);
    ContinuationConfig cfg;
    cfg.branch = Branch::V;
    const auto res = continuation_in_t(g, op, cfg);
    REQUIRE(res.completed);
    CHECK(res.t_current == doctest::Approx(n - 1 + cfg.v_margin));
    const double expect = 0.5 * std::log(coeff(res.t_current) / coeff(t0));
    for (double v : res.u.values) CHECK(v == doctest::Approx(expect).epsilon(0.02));
  }
  SUBCASE("flat metric has no admissible start") {
    const MetricField flat(ChartGrid::periodic_torus(n, 9), make_flat_metric());
    CHECK(kind_of([&] { continuation_in_t(flat, op); }) == ErrorKind::precondition);
  }
}
