#include <benchmark/benchmark.h>

#include "conelab/amenability.hpp"
#include "conelab/gallery.hpp"
#include "conelab/hull_constants.hpp"
#include "conelab/proj_exposed.hpp"

namespace {

using namespace conelab;

void BM_EstimateKappaPsd(benchmark::State& state) {
  const ConeSpec k = ConeSpec::psd(3);
  const FaceHandle f = psd_range_face(k, Mat::Identity(3, 2));
  ProbeOptions po;
  po.n_samples = static_cast<int>(state.range(0));
  const auto region = BoundedRegion::ball(Vec::Zero(k.dim()), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_kappa(k, f, region, po).kappa_hat);
}
BENCHMARK(BM_EstimateKappaPsd)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_AntipodalityAlpha(benchmark::State& state) {
  const ConeSpec k = ConeSpec::second_order(3);
  const FaceHandle f = whole_face(k);
  for (auto _ : state) benchmark::DoNotOptimize(antipodality_alpha(f, static_cast<int>(state.range(0))).alpha);
}
BENCHMARK(BM_AntipodalityAlpha)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_SungTamGallery(benchmark::State& state) {
  const ConeSpec k = gallery::nice_not_amenable_K(1024);
  const FaceHandle f = gallery::lifted_disk_alpha_face(k);
  SungTamOptions o;
  o.generator_count = 1024;
  for (auto _ : state) benchmark::DoNotOptimize(sung_tam_probe(k, f, o).deepest_level);
}
BENCHMARK(BM_SungTamGallery)->Unit(benchmark::kMillisecond);

void BM_RankOneProjection(benchmark::State& state) {
  const ConeSpec k = ConeSpec::second_order(3);
  const Vec x = (Vec(3) << 1, 0, 1).finished();
  ProjectionBuildOptions o;
  o.certify_samples = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(build_rank_one_projection(k, x, o).idempotency_residual);
}
BENCHMARK(BM_RankOneProjection)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
