#include <benchmark/benchmark.h>

#include "hwil/operators.hpp"
#include "hwil/sampling.hpp"
#include "hwil/weights.hpp"

using namespace hwil;

namespace {

const OuterFamily& outer() {
  static const OuterFamily of{AngularFamilies(12)};
  return of;
}

void BM_HerglotzSegment(benchmark::State& state) {
  const Complex z = std::polar(0.9, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(herglotz_segment(z, 0.1, 0.2));
}
BENCHMARK(BM_HerglotzSegment);

void BM_HerglotzCentered(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(herglotz_centered(0.999, 1e-3, 1e-8));
}
BENCHMARK(BM_HerglotzCentered);

void BM_ExponentBatch(benchmark::State& state) {
  const auto pts = sample_half_annulus({256, 1});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(outer().exponents(pts[i], static_cast<int>(state.range(0))));
    i = (i + 1) % pts.size();
  }
}
BENCHMARK(BM_ExponentBatch)->Arg(1)->Arg(12);

void BM_WeightEvaluation(benchmark::State& state) {
  const AngularFamilies fam(12);
  const auto w = make_wk(3, default_matrix(12, 12), fam, 12);
  const auto pts = sample_half_annulus({256, 2});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(w.at(pts[i]));
    i = (i + 1) % pts.size();
  }
}
BENCHMARK(BM_WeightEvaluation);

void BM_BoundaryPhases(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(outer().boundary_phases(Angle::in_family(3, 1e-9), 8));
}
BENCHMARK(BM_BoundaryPhases);

void BM_AssembleOperator(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble_operator(outer(), static_cast<int>(state.range(0)), QuadraturePlan{}));
}
BENCHMARK(BM_AssembleOperator)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
