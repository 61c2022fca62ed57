#include <benchmark/benchmark.h>

#include <memory>

#include "tpsfem/experiments.hpp"
#include "tpsfem/mesh.hpp"
#include "tpsfem/morley.hpp"
#include "tpsfem/noise.hpp"
#include "tpsfem/system.hpp"

namespace {

using namespace tpsfem;

std::shared_ptr<const MorleySpace> make_space(int divisions) {
  return std::make_shared<MorleySpace>(
      std::make_shared<Mesh2D>(build_uniform_mesh(divisions)));
}

void BM_AssembleStiffness(benchmark::State& state) {
  const auto space = make_space(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(*space));
  state.SetItemsProcessed(state.iterations() *
                          space->mesh().triangle_count());
}
BENCHMARK(BM_AssembleStiffness)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AssembleData(benchmark::State& state) {
  const auto space = make_space(64);
  const SampleSet samples = generate_samples(
      static_cast<int>(state.range(0)), SampleLayout::grid, gaussian_noise(1.0, 1));
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble_data(*space, samples));
  state.SetItemsProcessed(state.iterations() * samples.size());
}
BENCHMARK(BM_AssembleData)->Arg(2500)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SolveFit(benchmark::State& state) {
  const auto space = make_space(static_cast<int>(state.range(0)));
  const SampleSet samples =
      generate_samples(2500, SampleLayout::grid, gaussian_noise(1.0, 1));
  const FitProblem problem = build_fit_problem(space, samples);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_fit(problem, samples, 1e-5));
}
BENCHMARK(BM_SolveFit)->Arg(32)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_HatEval(benchmark::State& state) {
  const auto space = make_space(64);
  MorleyFunction f = interpolate(
      space, [](Point2 p) { return p.x * p.x + p.y; },
      [](Point2 p) { return Vec2{2.0 * p.x, 1.0}; });
  CounterRng rng(9, 0);
  std::vector<Point2> queries(100000);
  for (auto& q : queries) q = {rng.uniform01(), rng.uniform01()};
  for (auto _ : state) {
    double acc = 0.0;
    for (const Point2 q : queries) acc += hat_eval(f, q);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long long>(queries.size()));
}
BENCHMARK(BM_HatEval)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
