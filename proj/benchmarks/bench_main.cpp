#include <benchmark/benchmark.h>

#include "levysplit/fd_operators.hpp"
#include "levysplit/jump_generator.hpp"
#include "levysplit/matrix_functions.hpp"
#include "levysplit/time_stepping.hpp"

using namespace levysplit;

namespace {

Grid cgmy_grid(int n) {
  GridSpec s;
  s.x_min = std::log(1e-5);
  s.x_max = std::log(10.0);
  s.x_max_jump = std::log(1e3);
  s.n = n;
  return build_jump_grid(s);
}

void BM_MatrixExponential(benchmark::State& state) {
  const Grid g = cgmy_grid(static_cast<int>(state.range(0)));
  const Eigen::MatrixXd j = build_gtsp({{0.1, 2, 0.5}, {0.1, 2, 0.5}, 5}, g).dense();
  for (auto _ : state) benchmark::DoNotOptimize(matrix_exponential(j, 0.05));
  state.counters["nodes"] = static_cast<double>(g.size());
}
BENCHMARK(BM_MatrixExponential)->Arg(101)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_ToeplitzFractionalPower(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = build_uniform_grid(-3, 3, n);
  const Eigen::MatrixXd m =
      2.0 * Eigen::MatrixXd::Identity(n, n) - forward2(g).dense();
  for (auto _ : state) benchmark::DoNotOptimize(fractional_power_triangular(m, 1.5));
}
BENCHMARK(BM_ToeplitzFractionalPower)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

void BM_GeneralTriangularPower(benchmark::State& state) {
  const Grid g = cgmy_grid(static_cast<int>(state.range(0)));
  const auto n = static_cast<Eigen::Index>(g.size());
  const Eigen::MatrixXd m = 2.0 * Eigen::MatrixXd::Identity(n, n) - forward2(g).dense();
  for (auto _ : state) benchmark::DoNotOptimize(fractional_power_triangular(m, 0.5));
}
BENCHMARK(BM_GeneralTriangularPower)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_KouPicardStep(benchmark::State& state) {
  const Grid g = build_uniform_grid(std::log(1e-5), std::log(30.0), static_cast<int>(state.range(0)));
  const JumpGenerator j = build_kou({0.1, 0.3445, 3.0465, 3.0775}, g);
  SolutionState s{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size())), 0};
  for (std::size_t i = 0; i < g.size(); ++i) s.values[static_cast<Eigen::Index>(i)] = std::max(std::exp(g[i]) - 1, 0.0);
  for (auto _ : state) {
    SolutionState c = s;
    benchmark::DoNotOptimize(jump_full_step_picard(c, j, 0.25, 1e-9, 100));
  }
}
BENCHMARK(BM_KouPicardStep)->Arg(1601)->Arg(25601)->Unit(benchmark::kMillisecond);

void BM_GtspJumpStep(benchmark::State& state) {
  const Grid g = cgmy_grid(static_cast<int>(state.range(0)));
  const JumpGenerator j = build_gtsp({{0.1, 2, 1.98}, {0, 2, 1.98}, 5}, g);
  const ExpJumpStepper step(j, 0.01);
  SolutionState s{Eigen::VectorXd::Ones(static_cast<Eigen::Index>(g.size())), 0};
  for (auto _ : state) step.step(s);
}
BENCHMARK(BM_GtspJumpStep)->Arg(401)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
