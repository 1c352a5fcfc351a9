#include "sigmak/estimates/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sigmak/common/errors.hpp"
#include "sigmak/equation/evaluate.hpp"
#include "sigmak/estimates/quantities.hpp"
#include "sigmak/geometry/field_io.hpp"

namespace sigmak::estimates {

using equation::Branch;
using geometry::ScalarField;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string at_point(std::size_t p) { return " at point " + std::to_string(p); }

// Smallest C >= 0 with lhs_p <= C * base_p on the selected points; infinite when base_p <= 0
// while lhs_p > 0.
BoundCheck fit_ratio(const std::string& id, const std::vector<std::size_t>& pts, const std::vector<double>& lhs,
                     const std::vector<double>& base) {
  BoundCheck b{id, 0.0, 0.0, 0.0, 0.0, pts.empty() ? 0 : pts.front(), false};
  for (std::size_t p : pts) {
    const double l = lhs[p], d = base[p];
    double c;
    if (d > 0.0)
      c = l / d;
    else
      c = l > 0.0 ? kInf : 0.0;
    if (c > b.constant) {
      b.constant = c;
      b.point = p;
    }
  }
  b.lhs = lhs[b.point];
  b.rhs = std::isfinite(b.constant) ? b.constant * base[b.point] : kInf;
  b.margin = b.rhs - b.lhs;
  bool ok = std::isfinite(b.constant);
  for (std::size_t p : pts) {
    if (!ok) break;
    const double scale = std::max({1.0, std::abs(lhs[p]), std::abs(b.constant * base[p])});
    ok = lhs[p] <= b.constant * base[p] + 1e-12 * scale;
  }
  b.pass = ok;
  return b;
}

}  // namespace

void check_hypotheses(const equation::ProblemSpec& spec, const geometry::ChartGrid& grid, const Hypotheses& hyp) {
  const int n = spec.n();
  const bool W = spec.branch == Branch::W;
  const double ct = spec.trace_coefficient();
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double a = spec.a.at(p), b = spec.b.at(p);
    if (hyp.delta1) {
      const double v = W ? ct * a - b : -ct * a + b;
      if (!(v >= *hyp.delta1))
        fail(ErrorKind::hypothesis, std::string(W ? "(1-t)/(n-2) a - b" : "(t-1)/(n-2) a + b") + " >= delta1 fails" +
                                        at_point(p) + ": " + geometry::format_double(v) + " < " +
                                        geometry::format_double(*hyp.delta1));
    }
    if (hyp.delta3) {
      const double v = a + n * b;
      if (W && !(v <= -*hyp.delta3))
        fail(ErrorKind::hypothesis, "a + n b <= -delta3 fails" + at_point(p) + ": a + n b = " + geometry::format_double(v));
      if (!W && !(v >= *hyp.delta3))
        fail(ErrorKind::hypothesis, "a + n b >= delta3 fails" + at_point(p) + ": a + n b = " + geometry::format_double(v));
      if (!(a >= 0.0)) fail(ErrorKind::hypothesis, "a >= 0 fails" + at_point(p));
    }
    if (hyp.delta2) {
      const double v = std::min(2.0 * a * b + b * b, b * b);
      if (!(v >= *hyp.delta2))
        fail(ErrorKind::hypothesis, "min(2ab + b^2, b^2) >= delta2 fails" + at_point(p) + ": " + geometry::format_double(v));
    }
  }
  if (hyp.delta2) require(spec.op.k() >= 2, ErrorKind::hypothesis, "delta2 case needs the cone inside Gamma_2 (k >= 2)");
  for (const auto& d : {hyp.delta1, hyp.delta2, hyp.delta3})
    if (d) require(*d > 0.0, ErrorKind::hypothesis, "structure constants must be positive");
}

EstimateReport check_bounds(const ScalarField& u, const geometry::MetricField& g, const equation::ProblemSpec& spec,
                            const Hypotheses& hyp, double r, Exec exec) {
  const auto& grid = g.grid();
  require(hyp.delta1 || hyp.delta3, ErrorKind::argument, "check_bounds needs delta1 or delta3");
  require(r > 0.0, ErrorKind::argument, "ball radius must be positive");
  check_hypotheses(spec, grid, hyp);

  const equation::GeometryCache geo(g, exec);
  const auto ev = equation::evaluate_equation(u, geo, spec, false, exec);
  if (ev.inadmissible_count > 0)
    fail(ErrorKind::admissibility, "check_bounds: u is not admissible at " + std::to_string(ev.inadmissible_count) + " points");
  const auto T = equation::assemble_tensor(u, geo, spec, exec);
  const auto d = derivative_fields(u, geo, exec);
  const auto K = compute_K(d, spec.a);

  const int n = spec.n();
  const bool W = spec.branch == Branch::W;
  const double ct = spec.trace_coefficient();
  const double c_lap = W ? 1.0 + n * ct : -n * ct - 1.0;

  EstimateReport rep;
  rep.branch = spec.branch;
  rep.r = r;
  std::vector<std::size_t> ball;
  const double tol_r = r * (1.0 + 1e-12);
  bool first = true;
  rep.min_trace = kInf;
  std::vector<double> trace(grid.size(), 0.0);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double dist = grid.distance_to_center(p);
    if (dist > tol_r) continue;
    ball.push_back(p);
    if (dist <= 0.5 * tol_r) {
      rep.sup_grad_sq = std::max(rep.sup_grad_sq, d.grad_sq.values[p]);
      rep.sup_hess = std::max(rep.sup_hess, d.hess_norm.values[p]);
    }
    rep.K_min = first ? K.values[p] : std::min(rep.K_min, K.values[p]);
    rep.K_max = first ? K.values[p] : std::max(rep.K_max, K.values[p]);
    first = false;

    const Eigen::MatrixXd gi = g.matrix(p).inverse();
    const double tr = gi.cwiseProduct(T.matrix(p)).sum();
    const double trS = gi.cwiseProduct(spec.S.matrix(p)).sum();
    const double ab = spec.a.at(p) + n * spec.b.at(p);
    const double expect = c_lap * d.lap.values[p] + (W ? ab : -ab) * d.grad_sq.values[p] + trS;
    trace[p] = tr;
    rep.min_trace = std::min(rep.min_trace, tr);
    rep.trace_identity_error =
        std::max(rep.trace_identity_error, std::abs(tr - expect) / std::max({1.0, std::abs(tr), std::abs(expect)}));
  }
  require(!ball.empty(), ErrorKind::argument, "the ball of radius r contains no grid point");
  rep.K_branch = rep.K_max > 0.0 ? "K_positive" : "K_nonpositive";

  std::vector<double> Kp1(grid.size()), lapp1(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    Kp1[p] = K.values[p] + 1.0;
    lapp1[p] = d.lap.values[p] + 1.0;
  }

  if (hyp.delta1) {
    // n delta1 |du|^2 - c K <= C
    const double nd = n * *hyp.delta1;
    BoundCheck b{"grad_by_trace", 0.0, 0.0, 0.0, 0.0, ball.front(), true};
    for (std::size_t p : ball) {
      const double need = nd * d.grad_sq.values[p] - c_lap * K.values[p];
      if (need > b.constant) {
        b.constant = need;
        b.point = p;
      }
    }
    b.lhs = d.grad_sq.values[b.point];
    b.rhs = (c_lap * K.values[b.point] + b.constant) / nd;
    b.margin = b.rhs - b.lhs;
    for (std::size_t p : ball) {
      const double rhs = (c_lap * K.values[p] + b.constant) / nd;
      if (d.grad_sq.values[p] > rhs + 1e-12 * std::max(1.0, std::abs(rhs))) b.pass = false;
    }
    rep.bounds.push_back(b);
  }
  rep.bounds.push_back(fit_ratio("grad_by_K", ball, d.grad_sq.values, Kp1));
  rep.bounds.push_back(fit_ratio("hess_by_K", ball, d.hess_norm.values, Kp1));
  if (hyp.delta3) rep.bounds.push_back(fit_ratio("grad_by_lap", ball, d.grad_sq.values, lapp1));

  BoundCheck tb{"trace_nonneg", 0.0, 0.0, rep.min_trace, rep.min_trace, ball.front(), rep.min_trace >= -1e-12};
  for (std::size_t p : ball)
    if (trace[p] == rep.min_trace) {
      tb.point = p;
      break;
    }
  rep.bounds.push_back(tb);
  return rep;
}

std::vector<StabilityCheck> compare_constants(const EstimateReport& coarse, const EstimateReport& fine, double tol,
                                              double floor) {
  std::vector<StabilityCheck> out;
  for (const auto& c : coarse.bounds) {
    if (c.id == "trace_nonneg") continue;
    for (const auto& f : fine.bounds) {
      if (f.id != c.id) continue;
      StabilityCheck s{c.id, c.constant, f.constant, 1.0, false};
      const double hi = std::max(std::abs(c.constant), std::abs(f.constant));
      if (hi <= floor) {
        s.pass = true;
      } else if (std::isfinite(hi)) {
        s.ratio = f.constant / c.constant;
        s.pass = std::abs(c.constant - f.constant) <= tol * hi;
      }
      out.push_back(s);
    }
  }
  return out;
}

nlohmann::json to_json(const EstimateReport& report) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("inf"); };
  nlohmann::json bounds = nlohmann::json::array();
  for (const auto& b : report.bounds)
    bounds.push_back({{"id", b.id},
                      {"constant", num(b.constant)},
                      {"lhs", num(b.lhs)},
                      {"rhs", num(b.rhs)},
                      {"margin", num(b.margin)},
                      {"point", b.point},
                      {"pass", b.pass}});
  return {{"branch", equation::to_string(report.branch)},
          {"r", report.r},
          {"sup_grad_sq", report.sup_grad_sq},
          {"sup_hess", report.sup_hess},
          {"K_min", report.K_min},
          {"K_max", report.K_max},
          {"K_branch", report.K_branch},
          {"min_trace", num(report.min_trace)},
          {"trace_identity_error", report.trace_identity_error},
          {"bounds", bounds},
          {"boundary_max_location", report.boundary_max_location}};
}

void write_bounds_csv_header(std::ostream& os) { os << "scenario,id,constant,lhs,rhs,margin,point,pass\n"; }

void write_bounds_csv(std::ostream& os, const std::string& scenario, const EstimateReport& report) {
  using geometry::format_double;
  for (const auto& b : report.bounds)
    os << scenario << ',' << b.id << ',' << format_double(b.constant) << ',' << format_double(b.lhs) << ','
       << format_double(b.rhs) << ',' << format_double(b.margin) << ',' << b.point << ',' << (b.pass ? 1 : 0) << '\n';
}

}  // namespace sigmak::estimates
