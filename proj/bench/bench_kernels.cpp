// Serial reference vs OpenMP kernel for the sampling loops.

#include "sip/axioms.hpp"
#include "sip/geometry.hpp"
#include "sip/oracle.hpp"
#include "sip/regulariser.hpp"

#include <benchmark/benchmark.h>

using namespace sip;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_AxiomSuite(benchmark::State& state) {
  AxiomSuiteConfig cfg;
  cfg.samples = 10000;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(run_axiom_suite(cfg));
}

void BM_TangentialProbe(benchmark::State& state) {
  const Space space(4, 3.0);
  const Regulariser reg = Regulariser::radial(RadialProfile::power(1.0));
  ProbeOptions opt;
  opt.n_samples = 10000;
  opt.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(tangential_monotonicity_probe(reg, space, opt));
}

void BM_GridMin(benchmark::State& state) {
  const InterpolationProblem problem{Space(3, 3.0), {Vector{1.0, 0.5, -0.3}}, {1.0}};
  const Regulariser reg = Regulariser::radial(RadialProfile::power(1.0));
  OracleConfig cfg;
  cfg.grid_resolution = 101;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(grid_min(problem, reg, cfg));
}

void BM_PenaltyOracle(benchmark::State& state) {
  const InterpolationProblem problem{Space(4, 1.5), {Vector{1.0, 0.5, -0.3, 2.0}, Vector{0.0, 1.0, 1.0, -1.0}}, {1.0, -0.5}};
  const Regulariser reg = Regulariser::radial(RadialProfile::power(1.0));
  OracleConfig cfg;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(solve_constrained_direct(problem, reg, cfg));
}

void BM_Modulus(benchmark::State& state) {
  const Space space(5, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(modulus_of_smoothness_estimate(space, 1e-3, 20000, 0, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_AxiomSuite)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TangentialProbe)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridMin)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PenaltyOracle)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Modulus)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
