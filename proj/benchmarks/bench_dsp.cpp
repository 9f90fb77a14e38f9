#include <benchmark/benchmark.h>

#include "support/fixtures.hpp"
#include "vox/dsp.hpp"
#include "vox/pipeline.hpp"

namespace {

void BM_TrackPitch(benchmark::State& state) {
    const int rate = static_cast<int>(state.range(0));
    const vox::AudioClip clip = fixtures::tone(150.0, 2.0, rate, 0.005, 0.03);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vox::track_pitch(clip));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TrackPitch)->Arg(16000)->Arg(48000)->Unit(benchmark::kMillisecond);

void BM_TrackIntensity(benchmark::State& state) {
    const vox::AudioClip clip = fixtures::tone(150.0, 2.0, 48000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vox::track_intensity(clip));
    }
}
BENCHMARK(BM_TrackIntensity)->Unit(benchmark::kMillisecond);

void BM_FullFeatureExtraction(benchmark::State& state) {
    const int rate = static_cast<int>(state.range(0));
    vox::SynthSpec spec;
    spec.f0_hz = 170.0;
    spec.jitter_frac = 0.005;
    spec.shimmer_frac = 0.04;
    spec.leading_silence_s = 1.0;
    spec.total_speech_s = 1.5;
    spec.internal_pauses.emplace_back(0.6, 0.15);
    const vox::AudioClip clip = vox::synthesize_utterance(spec, rate);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vox::extract_features_clip(clip));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FullFeatureExtraction)->Arg(16000)->Arg(48000)->Unit(benchmark::kMillisecond);

}  // namespace
