#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "vox/errors.hpp"
#include "vox/io_util.hpp"
#include "vox/parallel.hpp"
#include "vox/pipeline.hpp"
#include "vox/rng.hpp"
#include "vox/wav.hpp"

namespace vox {

namespace {

// Bresenham-style interleaving: spreads n_special marks evenly over n slots.
bool interleaved_mark(int index, int n, int n_special) {
    const long a = static_cast<long>(index) * n_special / n;
    const long b = static_cast<long>(index + 1) * n_special / n;
    return b > a;
}

struct SpeakerProfile {
    std::string id;
    Gender gender = Gender::Male;
    bool hsa = false;
    int lsas = 0;
    double f0_base = 0.0;
    double intensity_offset = 0.0;
};

int draw_lsas(Rng& rng, bool hsa) {
    // group score distributions: LSA 19.74 (7.23) in [4,30], HSA 67.13 (15.17) in [50,107]
    const double raw = hsa ? rng.normal(67.13, 15.17) : rng.normal(19.74, 7.23);
    const double lo = hsa ? 50.0 : 4.0;
    const double hi = hsa ? 107.0 : 30.0;
    return static_cast<int>(std::lround(std::clamp(raw, lo, hi)));
}

}  // namespace

GeneratedCorpus generate_corpus(const SynthConfig& config, std::uint64_t seed, int jobs) {
    if (config.speakers < 2 || config.utterances_per_speaker < 1) {
        raise(ErrorCode::InvalidSpec, "corpus needs >= 2 speakers and >= 1 utterance each");
    }
    const bool refusal_only_shift = config.sa_shift_scope == "refusal_only";
    if (!refusal_only_shift && config.sa_shift_scope != "all") {
        raise(ErrorCode::InvalidSpec, "sa_shift_scope must be 'all' or 'refusal_only'");
    }

    Rng master(seed);
    const int n_female = static_cast<int>(std::lround(config.speakers * config.female_fraction));

    std::vector<SpeakerProfile> speakers(static_cast<std::size_t>(config.speakers));
    int female_seen = 0, male_seen = 0;
    int female_total = n_female, male_total = config.speakers - n_female;
    const int hsa_female = static_cast<int>(std::lround(female_total * config.hsa_fraction));
    const int hsa_male = static_cast<int>(std::lround(male_total * config.hsa_fraction));
    for (int s = 0; s < config.speakers; ++s) {
        Rng rng = master.fork(static_cast<std::uint64_t>(s));
        SpeakerProfile& sp = speakers[static_cast<std::size_t>(s)];
        char buf[16];
        std::snprintf(buf, sizeof(buf), "s%03d", s + 1);
        sp.id = buf;
        const bool female = interleaved_mark(s, config.speakers, n_female);
        sp.gender = female ? Gender::Female : Gender::Male;
        if (female) {
            sp.hsa = interleaved_mark(female_seen++, std::max(female_total, 1), hsa_female);
        } else {
            sp.hsa = interleaved_mark(male_seen++, std::max(male_total, 1), hsa_male);
        }
        sp.lsas = draw_lsas(rng, sp.hsa);
        const double f0_mean = female ? config.f0_female_hz : config.f0_male_hz;
        const double f0_sd = female ? config.f0_speaker_sd_female : config.f0_speaker_sd_male;
        sp.f0_base = rng.normal(f0_mean, f0_sd);
        sp.intensity_offset = rng.normal(0.0, config.intensity_speaker_sd);
    }

    GeneratedCorpus corpus;
    const std::size_t total =
        static_cast<std::size_t>(config.speakers) * config.utterances_per_speaker;
    corpus.rows.resize(total);
    corpus.clips.resize(total);

    parallel_for(total, jobs, [&](std::size_t idx) {
        const int s = static_cast<int>(idx) / config.utterances_per_speaker;
        const int u = static_cast<int>(idx) % config.utterances_per_speaker;
        const SpeakerProfile& sp = speakers[static_cast<std::size_t>(s)];
        Rng rng = master.fork(1000003ull + idx);

        // half refusal / half consent per speaker, interleaved
        const bool refusal = interleaved_mark(u, config.utterances_per_speaker,
                                              (config.utterances_per_speaker + 1) / 2);
        const bool sa_applies = sp.hsa && (!refusal_only_shift || refusal);

        SynthSpec spec;
        double f0 = sp.f0_base + rng.normal(0.0, config.f0_utterance_sd);
        if (sa_applies) {
            f0 += sp.gender == Gender::Female ? config.f0_delta_hsa_female
                                              : config.f0_delta_hsa_male;
        }
        spec.f0_hz = std::clamp(f0, 65.0, 495.0);

        double intensity = (sa_applies ? config.intensity_hsa_db : config.intensity_lsa_db) +
                           sp.intensity_offset +
                           rng.normal(0.0, config.intensity_utterance_sd) +
                           (refusal ? 0.5 : -0.5) * config.refusal_consent_gap_db;
        spec.intensity_db = std::clamp(intensity, 25.0, 84.0);

        double jitter = config.jitter_base + rng.normal(0.0, config.jitter_utterance_sd) +
                        (refusal ? 0.0 : config.jitter_delta_consent);
        spec.jitter_frac = std::clamp(jitter, 0.0, 0.2);

        double shimmer = config.shimmer_base + rng.normal(0.0, config.shimmer_utterance_sd) +
                         (sa_applies ? config.shimmer_delta_hsa : 0.0) +
                         (refusal ? 0.0 : config.shimmer_delta_consent);
        spec.shimmer_frac = std::clamp(shimmer, 0.0, 0.3);

        // intonation spread (consent utterances carry more of it) and a
        // per-utterance glottal duty, bounded so f0 stays trackable
        double drift = config.f0_drift_base + rng.normal(0.0, config.f0_drift_sd) +
                       (refusal ? 0.0 : config.f0_drift_delta_consent);
        const double drift_cap =
            std::min(1.0 - 66.0 / spec.f0_hz, 490.0 / spec.f0_hz - 1.0);
        spec.f0_drift_frac = std::clamp(drift, 0.0, std::max(0.0, drift_cap));
        spec.duty_frac = std::clamp(config.duty_base + rng.normal(0.0, config.duty_sd), 0.25, 0.55);

        spec.total_speech_s =
            std::clamp(rng.normal(config.duration_mean_s, config.duration_sd_s), 0.6, 3.0);
        const double lead_mean = config.lead_mean_s + (sa_applies ? config.lead_delta_hsa : 0.0);
        spec.leading_silence_s = std::clamp(rng.normal(lead_mean, config.lead_sd_s), 0.15, 3.0);

        if (rng.bernoulli(config.pause_prob)) {
            const double len = rng.uniform(config.pause_len_min_s, config.pause_len_max_s);
            const double onset = rng.uniform(0.25, 0.7) * spec.total_speech_s;
            if (onset + len < spec.total_speech_s - 0.1) {
                spec.internal_pauses.emplace_back(onset, len);
            }
        }

        RecordingMeta meta;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%s_u%02d", sp.id.c_str(), u + 1);
        meta.recording_id = buf;
        meta.speaker_id = sp.id;
        meta.gender = sp.gender;
        meta.lsas_score = sp.lsas;
        meta.utterance_type = refusal ? UtteranceType::Refusal : UtteranceType::Consent;
        meta.source_path = meta.recording_id + ".wav";

        corpus.rows[idx] = std::move(meta);
        corpus.clips[idx] = synthesize_utterance(spec, config.sample_rate_hz);
    });
    return corpus;
}

void write_corpus(const GeneratedCorpus& corpus, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    for (std::size_t i = 0; i < corpus.rows.size(); ++i) {
        write_wav((fs::path(dir) / corpus.rows[i].source_path).string(), corpus.clips[i]);
    }
    write_file_atomic((fs::path(dir) / "manifest.csv").string(), manifest_to_csv(corpus.rows));
}

}  // namespace vox
