#include <benchmark/benchmark.h>

#include <map>

#include "rpsgmm/classifier.hpp"
#include "rpsgmm/embedding.hpp"
#include "rpsgmm/gmm.hpp"
#include "rpsgmm/synthetic.hpp"

using namespace rpsgmm;

namespace {

Dataset bench_data() {
  SyntheticSpec spec;
  spec.length = 245;
  spec.per_class = 10;
  spec.noise = 1.0;
  spec.seed = 1;
  return generate_synthetic(spec);
}

void BM_Embed(benchmark::State& state) {
  const auto data = bench_data();
  const EmbeddingParams params{static_cast<int>(state.range(0)),
                               static_cast<int>(state.range(1))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(embed(data.series[0], params));
  }
}
BENCHMARK(BM_Embed)->Args({2, 5})->Args({8, 8})->Args({30, 8});

void BM_FitEm(benchmark::State& state) {
  const auto data = bench_data();
  const auto ps = embed(data.series[0], {2, 5});
  FitConfig config;
  config.n_components = static_cast<int>(state.range(0));
  config.seed = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_em(ps.points, config));
  }
}
BENCHMARK(BM_FitEm)->Arg(3)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const auto data = bench_data();
  std::map<std::string, TimeSeries> reps;
  for (const auto& s : data.series) {
    if (!reps.count(*s.label)) reps[*s.label] = s;
  }
  FitConfig config;
  config.seed = 7;
  const auto bundle = train(reps, {2, 5}, config);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify(data.series[i % data.series.size()],
                                      bundle));
    ++i;
  }
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

void BM_GridSearchCell(benchmark::State& state) {
  const auto data = bench_data();
  std::map<std::string, TimeSeries> reps;
  for (const auto& s : data.series) {
    if (!reps.count(*s.label)) reps[*s.label] = s;
  }
  FitConfig config;
  config.seed = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid_search(reps, data, 4, 4, config, 1));
  }
}
BENCHMARK(BM_GridSearchCell)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
