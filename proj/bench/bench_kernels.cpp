// Serial reference vs OpenMP path for the grid kernels. Arg(0) is serial, Arg(1) parallel.

#include <benchmark/benchmark.h>

#include <json.hpp>

#include "sigmak/cli/scenarios.hpp"
#include "sigmak/equation/evaluate.hpp"
#include "sigmak/estimates/quantities.hpp"
#include "sigmak/geometry/curvature.hpp"
#include "sigmak/geometry/metric_models.hpp"

using namespace sigmak;
using nlohmann::json;

namespace {

struct Setup {
  geometry::ChartGrid grid = geometry::ChartGrid::sphere_chart(3, 33, 0.5);
  geometry::MetricField g{grid, geometry::make_round_sphere_metric()};
  geometry::ScalarField u = cli::make_profile({{"kind", "random_modes"}, {"amplitude", 0.01}, {"modes", 3}}, grid, 1);
  equation::ProblemSpec spec = cli::build_problem(
      json::parse(R"({"branch": "W", "t": 1.0, "a": 1.0, "b": -0.5, "S": {"kind": "metric_multiple", "c": 0.5},
                      "operator": {"k": 2}, "rhs": {"kind": "exp_decay", "k": 1, "psi": "match_state"}})"),
      g, u);
  equation::GeometryCache geo{g};
};

const Setup& setup() {
  static const Setup s;
  return s;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_curvature(benchmark::State& state) {
  const auto& s = setup();
  for (auto _ : state) benchmark::DoNotOptimize(geometry::curvature(s.g, exec_of(state)));
}

void BM_evaluate_equation(benchmark::State& state) {
  const auto& s = setup();
  for (auto _ : state) benchmark::DoNotOptimize(equation::evaluate_equation(s.u, s.geo, s.spec, false, exec_of(state)));
}

void BM_derivative_fields(benchmark::State& state) {
  const auto& s = setup();
  for (auto _ : state) benchmark::DoNotOptimize(estimates::derivative_fields(s.u, s.geo, exec_of(state)));
}

void BM_linearize(benchmark::State& state) {
  const auto& s = setup();
  for (auto _ : state) benchmark::DoNotOptimize(equation::linearize(s.u, s.g, s.spec, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_curvature)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_evaluate_equation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_derivative_fields)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_linearize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
