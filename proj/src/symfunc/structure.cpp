#include "sigmak/symfunc/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sigmak/common/errors.hpp"

namespace sigmak::symfunc {

StructureReport check_structure_conditions(const OperatorSpec& spec,
                                           const std::vector<std::vector<double>>& samples,
                                           double epsilon) {
  require(!samples.empty(), ErrorKind::argument, "structure check needs at least one sample");
  require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorKind::argument, "epsilon must be finite and nonnegative");
  for (std::size_t s = 0; s < samples.size(); ++s) {
    require(static_cast<int>(samples[s].size()) == spec.n(), ErrorKind::dimension, "sample has wrong length");
    if (!in_cone(samples[s], spec.cone()))
      fail(ErrorKind::admissibility, "sample " + std::to_string(s) + " lies outside Gamma_" + std::to_string(spec.k()));
  }

  StructureReport rep;
  rep.operator_name = spec.name();
  rep.samples = samples.size();
  rep.epsilon = epsilon;
  rep.a1.worst = rep.a3.worst = rep.a4.worst = std::numeric_limits<double>::infinity();
  rep.a2.worst = 0.0;

  std::vector<double> grad(static_cast<std::size_t>(spec.n()));
  std::vector<double> values(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& lam = samples[s];
    const double f = F_value_gradient(spec, lam, grad);
    values[s] = f;
    if (f < rep.a1.worst) rep.a1 = {f > 0.0, f, static_cast<std::ptrdiff_t>(s)};
    const double gmin = *std::min_element(grad.begin(), grad.end());
    if (gmin < rep.a3.worst) rep.a3 = {gmin > 0.0, gmin, static_cast<std::ptrdiff_t>(s)};
    double s1 = 0.0;
    for (double x : lam) s1 += x;
    const double ratio = gmin * s1 / f;
    if (ratio < rep.a4.worst) rep.a4 = {true, ratio, static_cast<std::ptrdiff_t>(s)};
  }
  rep.a1.pass = rep.a1.worst > 0.0;
  rep.a3.pass = rep.a3.worst > 0.0;
  rep.largest_epsilon = rep.a4.worst;
  rep.a4.pass = rep.a4.worst >= epsilon - 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, epsilon);

  // The cone is convex, so each midpoint is admissible. A2 fails when the
  // midpoint value drops below the chord by more than rounding.
  std::vector<double> mid(static_cast<std::size_t>(spec.n()));
  for (std::size_t s = 0; s + 1 < samples.size(); ++s) {
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (samples[s][i] + samples[s + 1][i]);
    const double chord = 0.5 * (values[s] + values[s + 1]);
    const double gap = evaluate_F(spec, mid) - chord;
    if (gap < rep.a2.worst) {
      rep.a2.worst = gap;
      rep.a2.witness = static_cast<std::ptrdiff_t>(s);
    }
    const double tol = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(chord));
    if (gap < -tol) rep.a2.pass = false;
  }
  return rep;
}

void to_json(nlohmann::json& j, const ConditionResult& c) {
  j = nlohmann::json{{"pass", c.pass}, {"worst", c.worst}, {"witness", c.witness}};
}

void to_json(nlohmann::json& j, const StructureReport& r) {
  j = nlohmann::json{{"operator", r.operator_name}, {"samples", r.samples}, {"epsilon", r.epsilon},
                     {"A1", r.a1}, {"A2", r.a2}, {"A3", r.a3}, {"A4", r.a4},
                     {"largest_epsilon", r.largest_epsilon}};
}

}  // namespace sigmak::symfunc
