#include <benchmark/benchmark.h>

#include "support/fixtures.hpp"
#include "vox/learn.hpp"

namespace {

void BM_TrainGp(benchmark::State& state) {
    const int per_class = static_cast<int>(state.range(0));
    const vox::LabeledSet data = fixtures::clusters(per_class, 18, 1.0, 42);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vox::train_gp_classifier(data));
    }
    state.SetItemsProcessed(state.iterations() * data.size());
}
BENCHMARK(BM_TrainGp)->Arg(50)->Arg(150)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_TrainLogistic(benchmark::State& state) {
    const vox::LabeledSet data = fixtures::clusters(300, 18, 1.0, 43);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vox::train_logistic(data));
    }
}
BENCHMARK(BM_TrainLogistic)->Unit(benchmark::kMillisecond);

void BM_TrainGboost(benchmark::State& state) {
    const vox::LabeledSet data = fixtures::clusters(300, 18, 1.0, 44);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vox::train_gboost(data));
    }
}
BENCHMARK(BM_TrainGboost)->Unit(benchmark::kMillisecond);

void BM_TrainMlp(benchmark::State& state) {
    const vox::LabeledSet data = fixtures::clusters(300, 18, 1.0, 45);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vox::train_mlp(data));
    }
}
BENCHMARK(BM_TrainMlp)->Unit(benchmark::kMillisecond);

}  // namespace
