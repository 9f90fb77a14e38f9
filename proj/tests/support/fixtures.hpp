#pragma once

// Shared test fixtures: canonical clips and synthetic feature matrices.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "vox/features.hpp"
#include "vox/learn.hpp"
#include "vox/manifest.hpp"
#include "vox/rng.hpp"
#include "vox/synth.hpp"

namespace fixtures {

inline vox::AudioClip tone(double f0, double seconds = 1.0, int rate = 48000,
                           double jitter = 0.0, double shimmer = 0.0, double lead = 0.0,
                           double intensity_db = 75.0) {
    vox::SynthSpec spec;
    spec.f0_hz = f0;
    spec.jitter_frac = jitter;
    spec.shimmer_frac = shimmer;
    spec.leading_silence_s = lead;
    spec.total_speech_s = seconds;
    spec.intensity_db = intensity_db;
    return vox::synthesize_utterance(spec, rate);
}

inline vox::AudioClip white_noise(double amplitude, double seconds, int rate,
                                  std::uint64_t seed) {
    vox::AudioClip clip;
    clip.sample_rate_hz = rate;
    vox::Rng rng(seed);
    const std::size_t n = static_cast<std::size_t>(seconds * rate);
    clip.samples.resize(n);
    for (auto& s : clip.samples) s = rng.uniform(-amplitude, amplitude);
    return clip;
}

inline vox::AudioClip sine(double freq, double amplitude, double seconds, int rate) {
    vox::AudioClip clip;
    clip.sample_rate_hz = rate;
    const std::size_t n = static_cast<std::size_t>(seconds * rate);
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        clip.samples[i] = amplitude * std::sin(2.0 * 3.14159265358979323846 * freq * i / rate);
    }
    return clip;
}

// A feature matrix drawn directly in feature space (no audio), with optional
// per-feature group shifts.  Row labels alternate across speakers.
struct MatrixSpec {
    int speakers = 20;
    int rows_per_speaker = 4;
    // additive shift applied to positive-label rows, per feature
    std::array<double, vox::kFeatureCount> positive_shift{};
    std::array<double, vox::kFeatureCount> noise_sd;
    MatrixSpec() { noise_sd.fill(1.0); }
};

struct LabeledMatrix {
    vox::FeatureMatrix matrix;
    std::vector<int> labels;
};

inline LabeledMatrix make_matrix(const MatrixSpec& spec, std::uint64_t seed) {
    // plausible raw baselines per feature (Table-1-like magnitudes)
    const std::array<double, vox::kFeatureCount> base = {
        110.0, 260.0, 160.0, 33.0, 39.0, 64.0, 54.0, 6.0, 0.015,
        0.115, 4.7,   0.6,   0.4,  0.25, 0.15, 1.35, 0.06, 1.45};
    LabeledMatrix out;
    vox::Rng master(seed);
    int row_id = 0;
    for (int s = 0; s < spec.speakers; ++s) {
        // labels alternate every speaker, genders every two, so the four
        // gender x label cells all stay populated
        const bool positive = s % 2 == 1;
        const bool female = (s % 4) >= 2;
        vox::Rng rng = master.fork(static_cast<std::uint64_t>(s));
        for (int u = 0; u < spec.rows_per_speaker; ++u) {
            vox::FeatureRow row;
            row.meta.recording_id = "r" + std::to_string(++row_id);
            row.meta.speaker_id = "spk" + std::to_string(s);
            row.meta.gender = female ? vox::Gender::Female : vox::Gender::Male;
            row.meta.lsas_score = positive ? 70 : 20;
            row.meta.utterance_type =
                u % 2 == 0 ? vox::UtteranceType::Refusal : vox::UtteranceType::Consent;
            row.sa_group = positive ? vox::SAGroup::HSA : vox::SAGroup::LSA;
            for (std::size_t c = 0; c < vox::kFeatureCount; ++c) {
                row.values[c] = base[c] + rng.normal(0.0, spec.noise_sd[c]) +
                                (positive ? spec.positive_shift[c] : 0.0);
            }
            out.matrix.rows.push_back(std::move(row));
            out.labels.push_back(positive ? 1 : 0);
        }
    }
    return out;
}

// Two well-separated Gaussian clusters in dim dimensions (centers +/- delta/2
// on every coordinate).
inline vox::LabeledSet clusters(int per_class, int dim, double delta, std::uint64_t seed) {
    vox::LabeledSet set;
    vox::Rng rng(seed);
    for (int i = 0; i < 2 * per_class; ++i) {
        const int label = i % 2;
        std::vector<double> x(dim);
        for (int c = 0; c < dim; ++c) {
            x[c] = rng.normal(label ? delta / 2.0 : -delta / 2.0, 1.0);
        }
        set.x.push_back(std::move(x));
        set.y.push_back(label);
    }
    return set;
}

}  // namespace fixtures
