#include "sigmak/solver/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sigmak/common/errors.hpp"
#include "sigmak/estimates/quantities.hpp"
#include "sigmak/geometry/boundary.hpp"
#include "sigmak/geometry/curvature.hpp"
#include "sigmak/geometry/field_io.hpp"

namespace sigmak::solver {

using equation::Branch;
using geometry::MetricField;
using geometry::ScalarField;
using geometry::Tensor2Field;

namespace {


Tensor2Field family_source(const geometry::RicciFields& rc, const MetricField& g, Branch branch, double t) {
  Tensor2Field S = geometry::modified_schouten_from(rc, g, t);
  if (branch == Branch::V)
    for (double& v : S.values) v = -v;
  S.role = geometry::TensorRole::S;
  return S;
}

bool positive_definite(const Tensor2Field& S, const MetricField& g) {
  for (std::size_t p = 0; p < g.grid().size(); ++p) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(S.matrix(p), g.matrix(p), Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues()(0) > 0.0)) return false;
  }
  return true;
}

PathNode make_node(double t, const NewtonResult& r, const ScalarField& u, const equation::GeometryCache& geo, Exec exec) {
  const auto d = estimates::derivative_fields(u, geo, exec);
  const auto K = estimates::compute_K(d, equation::ScalarParameter::of(1.0));
  PathNode node;
  node.t = t;
  node.residual = r.report.final_residual;
  node.min_cone_distance = r.report.final_min_cone_distance;
  node.newton_iterations = r.report.iterations;
  node.K_min = std::numeric_limits<double>::infinity();
  node.K_max = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < u.size(); ++p) {
    node.sup_grad_sq = std::max(node.sup_grad_sq, d.grad_sq.values[p]);
    node.sup_hess = std::max(node.sup_hess, d.hess_norm.values[p]);
    node.sup_c2 = std::max(node.sup_c2, d.hess_norm.values[p] + d.grad_sq.values[p]);
    node.K_min = std::min(node.K_min, K.values[p]);
    node.K_max = std::max(node.K_max, K.values[p]);
  }
  return node;
}

}  // namespace

equation::ProblemSpec family_problem(const MetricField& g, const symfunc::OperatorSpec& op, Branch branch, double t,
                                     const Tensor2Field& St, const ScalarField& psi) {
  equation::ProblemSpec spec{branch,
                             t,
                             equation::ScalarParameter::of(1.0),
                             equation::ScalarParameter::of((t - 2.0) / 2.0),
                             St,
                             op,
                             equation::RhsModel::exp_decay(equation::ScalarParameter::of(psi), -1)};
  equation::validate_problem(spec, g.grid());
  return spec;
}

double choose_start(const MetricField& g, Branch branch) {
  const auto rc = geometry::ricci(g);
  const int n = g.grid().dim();
  if (branch == Branch::W) {
    if (positive_definite(family_source(rc, g, branch, 0.0), g)) return 0.0;
    for (double a = -1.0; a >= -1048576.0; a *= 2.0)
      if (positive_definite(family_source(rc, g, branch, a), g)) return a;
  } else {
    for (double t = 2.0 * (n - 1); t <= 1048576.0; t *= 2.0)
      if (positive_definite(family_source(rc, g, branch, t), g)) return t;
  }
  fail(ErrorKind::precondition, "no start parameter makes the modified Schouten tensor definite");
}

ContinuationResult continuation_in_t(const MetricField& g, const symfunc::OperatorSpec& op, const ContinuationConfig& cfg,
                                     Exec exec) {
  validate(cfg.newton);
  const auto& grid = g.grid();
  const int n = grid.dim();
  if (grid.has_boundary_face())
    require(geometry::second_fundamental_form(g).totally_geodesic, ErrorKind::precondition,
            "continuation needs a totally geodesic boundary face");
  const Branch branch = cfg.branch;
  const double a = cfg.t_start ? *cfg.t_start : choose_start(g, branch);
  const double target = cfg.t_end ? *cfg.t_end : (branch == Branch::W ? 1.0 : n - 1.0 + cfg.v_margin);
  if (branch == Branch::W)
    require(a <= target && target <= 1.0, ErrorKind::argument, "W continuation needs t_start <= t_end <= 1");
  else
    require(a >= target && target >= n - 1.0, ErrorKind::argument, "V continuation needs t_start >= t_end >= n-1");

  const auto rc = geometry::ricci(g, exec);
  const Tensor2Field Sa = family_source(rc, g, branch, a);
  if (!positive_definite(Sa, g))
    fail(ErrorKind::precondition, std::string(branch == Branch::W ? "A^a" : "-A^a") + " is not positive definite at t = " +
                                      geometry::format_double(a));
  const equation::GeometryCache geo(g, exec);
  const ScalarField psi = equation::psi_for_zero_solution(family_problem(g, op, branch, a, Sa, ScalarField(grid, geometry::ScalarRole::f, 1.0)), g);

  ContinuationResult out{false, a, target, a, ScalarField(grid, geometry::ScalarRole::u, 0.0), {}, {}};

  auto solve_at = [&](double t, const ScalarField& u0, const SolverConfig& sc) {
    return newton_solve(u0, geo, family_problem(g, op, branch, t, family_source(rc, g, branch, t), psi), sc, exec);
  };

  const NewtonResult first = solve_at(a, out.u, cfg.newton);
  if (first.report.status != NewtonStatus::converged) {
    out.failure = "start node did not converge: " + to_string(first.report.status);
    return out;
  }
  out.u = first.u;
  out.path.push_back(make_node(a, first, out.u, geo, exec));

  const double span = std::abs(target - a);
  const double dir = target >= a ? 1.0 : -1.0;
  const double floor = cfg.floor_fraction * span;
  double dt = cfg.initial_fraction * span;
  int successes = 0;
  double t = a;
  while (std::abs(target - t) > 0.0) {
    const double remaining = std::abs(target - t);
    const double t_next = dt >= remaining ? target : t + dir * dt;
    bool ok = false;
    NewtonResult res{out.u, {}};
    try {
      res = solve_at(t_next, out.u, cfg.newton);
      ok = res.report.status == NewtonStatus::converged;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::safeguard && e.kind() != ErrorKind::precondition && e.kind() != ErrorKind::admissibility)
        throw;
    }
    if (!ok) {
      dt *= 0.5;
      successes = 0;
      if (dt < floor) {
        out.failure = "step floor reached at t = " + geometry::format_double(t);
        return out;
      }
      continue;
    }
    t = t_next;
    out.u = res.u;
    out.t_current = t;
    out.path.push_back(make_node(t, res, out.u, geo, exec));
    if (++successes >= 2) {
      dt *= 2.0;
      successes = 0;
    }
  }

  // Polish the final node down to round-off.
  SolverConfig polish = cfg.newton;
  polish.residual_tol = kContinuationRoundoff;
  const NewtonResult fin = solve_at(t, out.u, polish);
  if (fin.report.final_residual <= out.path.back().residual) {
    const int before = out.path.back().newton_iterations;
    out.u = fin.u;
    out.path.back() = make_node(t, fin, out.u, geo, exec);
    out.path.back().newton_iterations += before;
  }
  out.completed = true;
  return out;
}

void write_path_csv(std::ostream& os, const ContinuationResult& r) {
  os << "t,residual_max,min_cone_distance,sup_grad_sq,sup_hess,sup_c2,K_min,K_max,newton_iterations\n";
  for (const auto& nd : r.path)
    os << geometry::format_double(nd.t) << ',' << geometry::format_double(nd.residual) << ','
       << geometry::format_double(nd.min_cone_distance) << ',' << geometry::format_double(nd.sup_grad_sq) << ','
       << geometry::format_double(nd.sup_hess) << ',' << geometry::format_double(nd.sup_c2) << ','
       << geometry::format_double(nd.K_min) << ',' << geometry::format_double(nd.K_max) << ',' << nd.newton_iterations
       << '\n';
}

}  // namespace sigmak::solver
