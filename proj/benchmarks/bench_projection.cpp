#include <benchmark/benchmark.h>

#include <vector>

#include "conelab/gallery.hpp"
#include "conelab/projection.hpp"

namespace {

using namespace conelab;

std::vector<Vec> inputs(Index dim, int count, std::uint64_t seed = 1) {
  Rng rng(seed);
  std::vector<Vec> xs;
  for (int i = 0; i < count; ++i) xs.push_back(2.0 * gaussian_vector(dim, rng));
  return xs;
}

void BM_ProjectSoc(benchmark::State& state) {
  const ConeSpec k = ConeSpec::second_order(state.range(0));
  const auto xs = inputs(k.dim(), 256);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(project(k, xs[i++ % xs.size()]).point);
}
BENCHMARK(BM_ProjectSoc)->Arg(3)->Arg(10)->Arg(100);

void BM_ProjectPsd(benchmark::State& state) {
  const ConeSpec k = ConeSpec::psd(state.range(0));
  const auto xs = inputs(k.dim(), 64);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(project(k, xs[i++ % xs.size()]).point);
}
BENCHMARK(BM_ProjectPsd)->Arg(2)->Arg(5)->Arg(20);

void BM_DykstraDoublyNonnegative(benchmark::State& state) {
  const Index n = state.range(0);
  const std::vector<ConeSpec> parts = {ConeSpec::psd(n), ConeSpec::orthant(n * (n + 1) / 2)};
  const auto xs = inputs(n * (n + 1) / 2, 16);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dykstra_intersection(parts, xs[i++ % xs.size()], 50000, 1e-10).point);
}
BENCHMARK(BM_DykstraDoublyNonnegative)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_HullDistanceGallery(benchmark::State& state) {
  const ConeSpec c = gallery::nice_not_amenable_C(static_cast<int>(state.range(0)));
  const auto xs = inputs(3, 16);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(project(c, xs[i++ % xs.size()]).distance);
}
BENCHMARK(BM_HullDistanceGallery)->Arg(256)->Arg(2048)->Unit(benchmark::kMicrosecond);

void BM_BlockNormCone(benchmark::State& state) {
  const std::array<Index, 2> blocks{2, 1};
  const auto xs = inputs(4, 256);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(project_max_block_norm_cone(xs[i++ % xs.size()], blocks));
}
BENCHMARK(BM_BlockNormCone);

}  // namespace

BENCHMARK_MAIN();
