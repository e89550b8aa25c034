#include <benchmark/benchmark.h>

#include <random>

#include "mmdt/experiment.hpp"
#include "mmdt/hinge_solver.hpp"
#include "mmdt/model.hpp"
#include "mmdt/synthgen.hpp"

namespace {

using namespace mmdt;

ShiftConfig shift(int classes, int dim, int target_per_class) {
  ShiftConfig c;
  c.num_classes = classes;
  c.d_source = c.d_target = dim;
  c.mean_scale = 6.0;
  c.mean_rank = 3;
  c.translation_scale = 3.0;
  c.source_per_class = 20;
  c.target_per_class = target_per_class;
  c.seed = 1;
  return c;
}

void BM_DenseSolve(benchmark::State& state) {
  const auto m = state.range(0), p = state.range(1);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  RowMatrix x(m, p);
  std::vector<double> signs(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    signs[static_cast<std::size_t>(i)] = i % 4 == 0 ? 1.0 : -1.0;
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = normal(rng) + signs[static_cast<std::size_t>(i)];
  }
  const hinge::HingeProblem problem(x, signs, std::vector<double>(static_cast<std::size_t>(m), 0.1), true);
  for (auto _ : state) benchmark::DoNotOptimize(hinge::solve(problem));
  state.SetComplexityN(m);
}
BENCHMARK(BM_DenseSolve)->Args({200, 20})->Args({400, 20})->Args({800, 20})->Args({400, 100})->Unit(benchmark::kMillisecond);

void BM_TransformStep(benchmark::State& state) {
  const int per_class = static_cast<int>(state.range(0));
  const auto domains = generate(shift(20, 50, per_class + 1));
  SplitSpec spec;
  spec.train_per_class = per_class;
  const auto split = make_split(domains.target, spec);
  TrainConfig config;
  config.c_source = config.c_target = 0.1;
  const auto planes = solve_classifier_step(TransformMatrix::zero(50, 50), domains.source, split.train, config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_transform_step(split.train, planes, 0.1, hinge::SolverOptions{1e-4, 10000}));
  }
  state.counters["n_T"] = static_cast<double>(split.train.size());
}
BENCHMARK(BM_TransformStep)->Arg(5)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Fit(benchmark::State& state) {
  const int per_class = static_cast<int>(state.range(0));
  const auto domains = generate(shift(10, 20, per_class + 1));
  SplitSpec spec;
  spec.train_per_class = per_class;
  const auto split = make_split(domains.target, spec);
  TrainConfig config;
  config.c_source = config.c_target = 0.1;
  config.max_outer_iters = 4;
  config.outer_tol = 1e-12;
  for (auto _ : state) benchmark::DoNotOptimize(fit(domains.source, split.train, config));
}
BENCHMARK(BM_Fit)->Arg(3)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
