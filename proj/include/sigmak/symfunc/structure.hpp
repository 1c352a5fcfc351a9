#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "sigmak/symfunc/operator_family.hpp"

namespace sigmak::symfunc {

struct ConditionResult {
  bool pass = true;
  double worst = 0.0;             // worst observed margin, in the condition's own units
  std::ptrdiff_t witness = -1;    // sample index realising `worst`
};

/// Numerical check of the four structure conditions on a finite sample of Gamma_k.
///   A1 positivity, A2 midpoint concavity along consecutive sample pairs,
///   A3 strict ellipticity, A4 min_i dF/dlambda_i * sigma_1 / F >= epsilon.
struct StructureReport {
  std::string operator_name;
  std::size_t samples = 0;
  double epsilon = 0.0;
  ConditionResult a1, a2, a3, a4;
  double largest_epsilon = 0.0;  // largest epsilon for which A4 holds on the sample
};

StructureReport check_structure_conditions(const OperatorSpec& spec,
                                           const std::vector<std::vector<double>>& samples,
                                           double epsilon);

void to_json(nlohmann::json& j, const ConditionResult& c);
void to_json(nlohmann::json& j, const StructureReport& r);

}  // namespace sigmak::symfunc
