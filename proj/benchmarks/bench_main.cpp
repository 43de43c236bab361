#include <benchmark/benchmark.h>

#include "cpflow/analysis.hpp"
#include "cpflow/flow.hpp"
#include "cpflow/variational.hpp"

namespace {

constexpr double kHalfPi = 1.5707963267948966;

void BM_ExtractBall(benchmark::State& state) {
  const auto gen = cpflow::lattice_generator("triangular-disk", kHalfPi);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gen.extract(n));
}
BENCHMARK(BM_ExtractBall)->Arg(4)->Arg(8)->Arg(16);

void BM_AssembleJacobian(benchmark::State& state) {
  const auto ball = cpflow::lattice_generator("triangular-disk", kHalfPi).extract(static_cast<int>(state.range(0)));
  const auto s = cpflow::PatternState::uniform_radius(ball.complex.vertex_count(), 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(cpflow::assemble_jacobian(s, ball.complex));
  state.counters["vertices"] = static_cast<double>(ball.complex.vertex_count());
}
BENCHMARK(BM_AssembleJacobian)->Arg(4)->Arg(8)->Arg(16);

void BM_FlowStep(benchmark::State& state) {
  const auto ball = cpflow::lattice_generator("triangular-disk", kHalfPi).extract(8);
  const std::size_t n = ball.complex.vertex_count();
  const auto targets = cpflow::TargetCurvature::constant(n, 6.0);
  const auto s = cpflow::PatternState::uniform_radius(n, 0.7);
  const auto method = static_cast<cpflow::Integrator>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cpflow::step(s, ball.complex, targets, 0.01, method));
  state.SetLabel(cpflow::to_string(method));
}
BENCHMARK(BM_FlowStep)->Arg(0)->Arg(1);

void BM_NewtonSolve(benchmark::State& state) {
  const auto ball = cpflow::lattice_generator("triangular-disk", kHalfPi).extract(static_cast<int>(state.range(0)));
  const std::size_t n = ball.complex.vertex_count();
  const auto star = cpflow::PatternState::uniform_radius(n, 0.9);
  const cpflow::TargetCurvature targets(cpflow::curvatures(star, ball.complex));
  const auto init = cpflow::PatternState::uniform_radius(n, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(cpflow::newton_solve(ball.complex, targets, init));
}
BENCHMARK(BM_NewtonSolve)->Arg(3)->Arg(6);

void BM_BruteForceConditions(benchmark::State& state) {
  const auto ball = cpflow::lattice_generator("square-grid", kHalfPi).extract(2);
  const auto targets = cpflow::TargetCurvature::constant(ball.complex.vertex_count(), 2.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(cpflow::check_conditions(ball.complex, targets, nullptr, cpflow::CheckMode::brute));
}
BENCHMARK(BM_BruteForceConditions);

}  // namespace

BENCHMARK_MAIN();
