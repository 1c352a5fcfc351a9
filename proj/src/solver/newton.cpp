#include "sigmak/solver/newton.hpp"

#include <cmath>
#include <ostream>

#include "sigmak/common/errors.hpp"
#include "sigmak/geometry/field_io.hpp"
#include "sigmak/solver/jacobian.hpp"

namespace sigmak::solver {

using geometry::ScalarField;

std::string to_string(NewtonStatus s) {
  switch (s) {
    case NewtonStatus::converged: return "converged";
    case NewtonStatus::max_iterations: return "max_iterations";
    case NewtonStatus::stalled: return "stalled";
    case NewtonStatus::singular: return "singular";
  }
  return "?";
}

void validate(const SolverConfig& cfg) {
  require(cfg.max_newton_iters >= 1, ErrorKind::validation, "max_newton_iters must be positive");
  require(cfg.residual_tol > 0.0, ErrorKind::validation, "residual_tol must be positive");
  require(cfg.shrink > 0.0 && cfg.shrink < 1.0, ErrorKind::validation, "shrink factor must lie in (0, 1)");
  require(cfg.min_step > 0.0 && cfg.min_step <= 1.0, ErrorKind::validation, "min_step must lie in (0, 1]");
  require(cfg.admissibility_margin >= 0.0, ErrorKind::validation, "admissibility_margin must be non-negative");
}

SolverConfig solver_config_from_json(const nlohmann::json& j) {
  SolverConfig c;
  c.max_newton_iters = j.value("max_newton_iters", c.max_newton_iters);
  c.residual_tol = j.value("residual_tol", c.residual_tol);
  c.shrink = j.value("shrink", c.shrink);
  c.min_step = j.value("min_step", c.min_step);
  c.admissibility_margin = j.value("admissibility_margin", c.admissibility_margin);
  const std::string ls = j.value("linear_solver", std::string("nested_dissection"));
  if (ls == "colamd")
    c.linear_solver = geometry::Ordering::colamd;
  else
    require(ls == "nested_dissection", ErrorKind::validation, "linear_solver must be nested_dissection or colamd");
  validate(c);
  return c;
}

void to_json(nlohmann::json& j, const SolverConfig& c) {
  j = {{"max_newton_iters", c.max_newton_iters},
       {"residual_tol", c.residual_tol},
       {"shrink", c.shrink},
       {"min_step", c.min_step},
       {"admissibility_margin", c.admissibility_margin},
       {"linear_solver", c.linear_solver == geometry::Ordering::colamd ? "colamd" : "nested_dissection"}};
}

namespace {

struct Probe {
  bool admissible = false;
  double residual = 0.0;
  double min_cone = 0.0;
};

Probe probe(const ScalarField& u, const equation::GeometryCache& geo, const equation::ProblemSpec& spec,
            const UnknownMap& unknowns, Exec exec) {
  const auto ev = equation::evaluate_equation(u, geo, spec, true, exec);
  Probe p;
  p.admissible = ev.inadmissible_count == 0;
  p.min_cone = ev.min_cone_distance;
  // The pinned point is included: its equation holds only if the data are compatible.
  double r = 0.0;
  for (std::size_t q : unknowns.points) r = std::max(r, std::abs(ev.residual.values[q]));
  if (unknowns.pinned >= 0) r = std::max(r, std::abs(ev.residual.values[static_cast<std::size_t>(unknowns.pinned)]));
  p.residual = r;
  return p;
}

bool closed_chart(const geometry::ChartGrid& grid) {
  for (int a = 0; a < grid.dim(); ++a)
    if (!grid.periodic(a)) return false;
  return true;
}

}  // namespace

NewtonResult newton_solve(const ScalarField& u0, const equation::GeometryCache& geo, const equation::ProblemSpec& spec,
                          const SolverConfig& cfg, Exec exec) {
  validate(cfg);
  const auto& grid = geo.grid();
  const long pin =
      closed_chart(grid) && equation::rhs_independent_of_u(spec.rhs) ? static_cast<long>(grid.size() / 2) : -1;
  const UnknownMap unknowns = make_unknowns(grid, pin);

  NewtonResult out{u0, {}};
  out.report.pinned_point = pin;
  Probe cur = probe(out.u, geo, spec, unknowns, exec);
  if (!cur.admissible)
    fail(ErrorKind::precondition, "initial guess is not admissible (min cone distance " + std::to_string(cur.min_cone) + ")");

  geometry::SparseDirectSolver lu(grid, unknowns.points, cfg.linear_solver);
  for (int it = 0;; ++it) {
    out.report.history.push_back({it, cur.residual, 0.0, cur.min_cone});
    out.report.iterations = it;
    out.report.final_residual = cur.residual;
    out.report.final_min_cone_distance = cur.min_cone;
    if (cur.residual <= cfg.residual_tol) {
      out.report.status = NewtonStatus::converged;
      return out;
    }
    if (it == cfg.max_newton_iters) {
      out.report.status = NewtonStatus::max_iterations;
      return out;
    }
    const NewtonSystem sys = assemble_system(out.u, geo, spec, unknowns, exec);
    Eigen::VectorXd delta;
    try {
      lu.factorize(sys.J);
      delta = lu.solve(-sys.r);
    } catch (const Error& e) {
      out.report.status = NewtonStatus::singular;
      out.report.message = e.what();
      return out;
    }

    double alpha = 1.0;
    bool any_admissible = false;
    bool accepted = false;
    ScalarField trial = out.u;
    Probe next;
    while (alpha >= cfg.min_step) {
      for (std::size_t k = 0; k < unknowns.size(); ++k)
        trial.values[unknowns.points[k]] = out.u.values[unknowns.points[k]] + alpha * delta(static_cast<Eigen::Index>(k));
      next = probe(trial, geo, spec, unknowns, exec);
      const bool ok = next.admissible && next.min_cone >= cfg.admissibility_margin;
      any_admissible = any_admissible || ok;
      if (ok && next.residual < cur.residual) {
        accepted = true;
        break;
      }
      alpha *= cfg.shrink;
    }
    if (!accepted) {
      if (!any_admissible)
        fail(ErrorKind::safeguard, "line search could not keep the iterate admissible at iteration " + std::to_string(it + 1));
      out.report.status = NewtonStatus::stalled;
      out.report.message = "no step reduced the residual below " + geometry::format_double(cur.residual);
      return out;
    }
    out.report.history.back().step = alpha;
    out.u = trial;
    cur = next;
  }
}

NewtonResult newton_solve(const ScalarField& u0, const geometry::MetricField& g, const equation::ProblemSpec& spec,
                          const SolverConfig& cfg, Exec exec) {
  return newton_solve(u0, equation::GeometryCache(g, exec), spec, cfg, exec);
}

std::vector<double> quadratic_ratios(const NewtonReport& report, int count, double floor) {
  const auto& h = report.history;
  int last = static_cast<int>(h.size()) - 1;
  while (last > 0 && h[static_cast<std::size_t>(last)].residual <= floor) --last;
  std::vector<double> r;
  for (int i = std::max(0, last - count); i < last; ++i) {
    const double a = h[static_cast<std::size_t>(i)].residual;
    r.push_back(h[static_cast<std::size_t>(i) + 1].residual / (a * a));
  }
  return r;
}

void write_log_csv(std::ostream& os, const NewtonReport& report) {
  os << "iteration,residual_max,step,min_cone_distance\n";
  for (const auto& l : report.history)
    os << l.iteration << ',' << geometry::format_double(l.residual) << ',' << geometry::format_double(l.step) << ','
       << geometry::format_double(l.min_cone_distance) << '\n';
}

}  // namespace sigmak::solver
