#include <benchmark/benchmark.h>

#include "support/fixtures.hpp"
#include "vox/rng.hpp"
#include "vox/stats.hpp"

namespace {

void BM_AnovaOneway(benchmark::State& state) {
    vox::Rng rng(7);
    std::vector<double> a(768), b(768);
    for (auto& x : a) x = rng.normal(0.0, 1.0);
    for (auto& x : b) x = rng.normal(0.3, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vox::anova_oneway({a, b}));
    }
}
BENCHMARK(BM_AnovaOneway);

void BM_RankFeatures(benchmark::State& state) {
    fixtures::MatrixSpec spec;
    spec.speakers = 64;
    spec.rows_per_speaker = 24;
    spec.positive_shift[vox::kIntensityMean] = 2.0;
    auto lm = fixtures::make_matrix(spec, 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vox::rank_features_anova(lm.matrix, lm.labels));
    }
}
BENCHMARK(BM_RankFeatures)->Unit(benchmark::kMillisecond);

void BM_IncompleteBeta(benchmark::State& state) {
    for (auto _ : state) {
        double acc = 0.0;
        for (double f = 0.5; f < 40.0; f += 0.5) {
            acc += vox::f_sf(f, 1.0, 61.0);
        }
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_IncompleteBeta);

}  // namespace
