#include <benchmark/benchmark.h>

#include "loganom/detectors.hpp"
#include "loganom/ensemble.hpp"
#include "loganom/features.hpp"
#include "loganom/reduce.hpp"
#include "loganom/synthetic.hpp"

using namespace loganom;

namespace {

// One shared synthetic pipeline front half, sized per benchmark argument.
Matrix embedding_for(std::size_t n) {
  SyntheticConfig cfg;
  cfg.n_records = n;
  cfg.outlier_fraction = 0.02;
  cfg.seed = 42;
  const SyntheticDataset data = generate_synthetic(cfg);
  const FeatureMatrix z = standardize(build_features(data.records));
  return pca_fit(z, 3).coords;
}

void bench_generate(benchmark::State& state) {
  SyntheticConfig cfg;
  cfg.n_records = static_cast<std::size_t>(state.range(0));
  cfg.outlier_fraction = 0.02;
  cfg.seed = 42;
  for (auto _ : state)
    benchmark::DoNotOptimize(generate_synthetic(cfg).records.size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_generate)->Arg(1000)->Arg(5000);

void bench_features(benchmark::State& state) {
  SyntheticConfig cfg;
  cfg.n_records = static_cast<std::size_t>(state.range(0));
  cfg.seed = 42;
  const SyntheticDataset data = generate_synthetic(cfg);
  for (auto _ : state)
    benchmark::DoNotOptimize(standardize(build_features(data.records)).values.sum());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_features)->Arg(1000)->Arg(5000);

void bench_pca(benchmark::State& state) {
  SyntheticConfig cfg;
  cfg.n_records = static_cast<std::size_t>(state.range(0));
  cfg.seed = 42;
  const FeatureMatrix z =
      standardize(build_features(generate_synthetic(cfg).records));
  for (auto _ : state)
    benchmark::DoNotOptimize(pca_fit(z, 3).coords.sum());
}
BENCHMARK(bench_pca)->Arg(1000)->Arg(5000);

void bench_knn(benchmark::State& state) {
  const Matrix coords = embedding_for(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(knn_score(coords, 20).front());
}
BENCHMARK(bench_knn)->Arg(500)->Arg(2000);

void bench_lof(benchmark::State& state) {
  const Matrix coords = embedding_for(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(lof_score(coords, 50).front());
}
BENCHMARK(bench_lof)->Arg(500)->Arg(2000);

void bench_iforest(benchmark::State& state) {
  const Matrix coords = embedding_for(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const auto forest = IsolationForest::fit(coords, 100, 256, 1);
    benchmark::DoNotOptimize(forest.score(coords).front());
  }
}
BENCHMARK(bench_iforest)->Arg(500)->Arg(2000);

void bench_ocsvm(benchmark::State& state) {
  const Matrix coords = embedding_for(static_cast<std::size_t>(state.range(0)));
  OcsvmParams params;
  for (auto _ : state) {
    const auto model = OneClassSvm::fit(coords, params);
    benchmark::DoNotOptimize(model.score(coords).front());
  }
}
BENCHMARK(bench_ocsvm)->Arg(500)->Arg(2000);

void bench_ensemble(benchmark::State& state) {
  const Matrix coords = embedding_for(static_cast<std::size_t>(state.range(0)));
  EnsembleConfig cfg = EnsembleConfig::defaults();
  cfg.seed = 42;
  for (auto _ : state)
    benchmark::DoNotOptimize(run_ensemble(coords, cfg).consensus_flags.size());
}
BENCHMARK(bench_ensemble)->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
