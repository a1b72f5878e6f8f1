#include <random>

#include <benchmark/benchmark.h>

#include "topograd/diagram.hpp"
#include "topograd/features.hpp"
#include "topograd/objective.hpp"
#include "topograd/synth.hpp"

using namespace topograd;

namespace {

std::vector<double> uniform(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

void BM_ImageDiagram(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const ScalarField img(side, side, uniform(static_cast<std::size_t>(side) * side, 0));
  for (auto _ : state) {
    auto d = reduce(grid_filtration(img, Direction::superlevel), 1);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_ImageDiagram)->Arg(28)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ImageUnionFind(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const ScalarField img(side, side, uniform(static_cast<std::size_t>(side) * side, 0));
  for (auto _ : state) {
    auto d = pd0_union_find(grid_filtration(img, Direction::superlevel));
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_ImageUnionFind)->Arg(28)->Arg(64)->Unit(benchmark::kMillisecond);

// Threshold in thousandths of the unit square side.
void BM_RipsDiagram(benchmark::State& state) {
  const PointCloud cloud(2, uniform(2 * static_cast<std::size_t>(state.range(0)), 1));
  const double threshold = static_cast<double>(state.range(1)) / 1000.0;
  for (auto _ : state) {
    auto d = reduce(rips_filtration(cloud, 1, threshold), 1);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_RipsDiagram)->Args({100, 0})->Args({300, 150})->Args({300, 250})->Unit(benchmark::kMillisecond);

void BM_WeakAlphaGradient(benchmark::State& state) {
  const PointCloud cloud(2, uniform(2 * static_cast<std::size_t>(state.range(0)), 2));
  const std::vector<LossTerm> terms{{{2.0, 0.0, 2, 0}, 1.0}};
  for (auto _ : state) {
    auto v = evaluate_point_cloud(cloud, {PointFiltration::weak_alpha, 0.0}, terms);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_WeakAlphaGradient)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LowerStarGradient(benchmark::State& state) {
  auto grid = std::make_shared<const SimplicialComplex>(build_freudenthal_grid(28, 28));
  const auto img = uniform(28 * 28, 3);
  const std::vector<LossTerm> terms{{{1.0, 0.0, 2, 0}, 1.0}, {{1.0, 0.0, 2, 1}, 1.0}};
  for (auto _ : state) {
    auto v = evaluate_lower_star(grid, img, Direction::superlevel, terms);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_LowerStarGradient)->Unit(benchmark::kMillisecond);

void BM_Wasserstein(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto make = [](std::size_t n, std::uint64_t seed) {
    const auto v = uniform(2 * n, seed);
    std::vector<DiagramPoint> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({v[2 * i], v[2 * i] + v[2 * i + 1]});
    return pts;
  };
  const auto a = make(n, 4), b = make(n, 5);
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein(a, b, 2.0));
}
BENCHMARK(BM_Wasserstein)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_TopoFeatures(benchmark::State& state) {
  const ScalarField img(16, 16, uniform(256, 6));
  for (auto _ : state) {
    TopoFeatures f(img);
    benchmark::DoNotOptimize(f.vjp(std::vector<double>(kFeatureCount, 1.0)));
  }
}
BENCHMARK(BM_TopoFeatures)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
