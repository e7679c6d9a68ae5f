#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "gffexc/excursions.hpp"
#include "gffexc/lattice.hpp"
#include "gffexc/metric.hpp"
#include "gffexc/minkowski.hpp"
#include "gffexc/replica.hpp"

using namespace gffexc;

namespace {

const GreenOperator& green(int n) {
  static GreenCache cache;
  static std::map<int, std::shared_ptr<const GreenOperator>> held;
  auto& slot = held[n];
  if (!slot) slot = cache.get(DomainSpec(), n);
  return *slot;
}

void BM_Factorize(benchmark::State& state) {
  const auto domain = build_domain(DomainSpec(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(GreenOperator(domain));
  state.counters["vertices"] = static_cast<double>(domain->interior_count());
}
BENCHMARK(BM_Factorize)->DenseRange(5, 7)->Unit(benchmark::kMillisecond);

void BM_Sample(benchmark::State& state) {
  const auto& gop = green(static_cast<int>(state.range(0)));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(gop.sample(rng));
}
BENCHMARK(BM_Sample)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

void BM_Openings(benchmark::State& state) {
  const auto& gop = green(static_cast<int>(state.range(0)));
  Rng rng(2);
  const Field phi = gop.sample(rng);
  for (auto _ : state) benchmark::DoNotOptimize(sample_openings(phi, rng));
}
BENCHMARK(BM_Openings)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  const auto& gop = green(static_cast<int>(state.range(0)));
  Rng rng(3);
  const Field phi = gop.sample(rng);
  const auto open = sample_openings(phi, rng);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(phi, open));
}
BENCHMARK(BM_Decompose)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

void BM_DistanceTransform(benchmark::State& state) {
  const auto& gop = green(static_cast<int>(state.range(0)));
  const Replica rep = draw_replica(gop, 4, 0);
  const auto& largest = rep.decomposition.clusters.front();
  for (auto _ : state) benchmark::DoNotOptimize(distance_transform(largest, gop.domain()));
}
BENCHMARK(BM_DistanceTransform)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

void BM_SelectedInversion(benchmark::State& state) {
  const auto domain = build_domain(DomainSpec(), static_cast<int>(state.range(0)));
  for (auto _ : state) {
    GreenOperator gop(domain);
    benchmark::DoNotOptimize(gop.diagonal().data());
  }
}
BENCHMARK(BM_SelectedInversion)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
