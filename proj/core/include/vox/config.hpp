#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vox/dsp.hpp"
#include "vox/eval.hpp"
#include "vox/learn.hpp"

namespace vox {

// Corpus generator parameters.  The defaults reproduce the calibrated
// simulation corpus: gender-specific F0 bases, group-level intensity shift,
// refusal/consent intensity gap, per-speaker and per-utterance variation.
struct SynthConfig {
    int speakers = 64;
    int utterances_per_speaker = 24;
    int sample_rate_hz = 16000;
    double female_fraction = 0.5;
    double hsa_fraction = 0.5;

    double f0_male_hz = 120.17;
    double f0_female_hz = 195.97;
    double f0_speaker_sd_male = 16.1;
    double f0_speaker_sd_female = 23.6;
    double f0_utterance_sd = 3.0;
    double f0_delta_hsa_male = -5.9;
    double f0_delta_hsa_female = 10.81;

    // intonation ramp: yields a within-utterance F0 spread (std ~ f0*drift/sqrt(3))
    double f0_drift_base = 0.30;
    double f0_drift_sd = 0.05;
    double f0_drift_delta_consent = 0.035;

    // glottal duty cycle; its spread decorrelates peak level from mean level
    double duty_base = 0.40;
    double duty_sd = 0.06;

    double intensity_lsa_db = 54.82;
    double intensity_hsa_db = 52.34;
    double intensity_speaker_sd = 1.5;
    double intensity_utterance_sd = 4.2;
    double refusal_consent_gap_db = 1.75;  // refusal louder by this much

    double jitter_base = 0.0075;
    double jitter_utterance_sd = 0.0015;
    double jitter_delta_consent = 0.0005;

    double shimmer_base = 0.055;
    double shimmer_utterance_sd = 0.01;
    double shimmer_delta_hsa = 0.004;
    double shimmer_delta_consent = 0.005;

    double duration_mean_s = 1.4;
    double duration_sd_s = 0.15;
    double lead_mean_s = 1.3;
    double lead_sd_s = 0.25;
    double lead_delta_hsa = 0.04;

    double pause_prob = 0.15;
    double pause_len_min_s = 0.08;
    double pause_len_max_s = 0.22;

    // "all": HSA/LSA parameter shifts apply to every utterance;
    // "refusal_only": consent utterances carry no group signal.
    std::string sa_shift_scope = "all";
};

struct RunConfig {
    // inputs / outputs
    std::string manifest;
    std::string features;  // precomputed feature CSV (alternative to manifest)
    std::string out_dir = "out";

    // pipeline switches
    std::uint64_t seed = 1;
    int jobs = 0;  // 0 = all cores
    bool paper_fidelity = false;
    std::string classifier = "gp";
    std::string fold_mode = "speaker";
    int cv_k = 10;
    bool stratified = true;
    // outlier handling for the stats command; the ML pipeline always
    // winsorizes because its models need complete vectors
    std::string outlier_mode = "exclude_value";
    double outlier_k = 3.0;
    bool stats_split_by_gender = false;
    bool shuffle_labels = false;  // permutation-null runs

    DspParams dsp;
    LearnParams learn;
    SynthConfig synth;

    FoldMode fold_mode_enum() const;
    OutlierMode outlier_mode_enum() const;
    std::vector<ModelKind> classifiers() const;  // "all" expands to the zoo
};

// Flat "key = value" file with # comments; every key has a default, unknown
// keys are rejected.  Returns the defaults when path is empty.
RunConfig load_config(const std::string& path);

void apply_config_line(RunConfig& config, const std::string& key, const std::string& value);

// The full resolved configuration as ordered JSON text (embedded verbatim in
// every report so a run can be reproduced from its output alone).
std::string config_to_json(const RunConfig& config);

}  // namespace vox
