#include "vox/pipeline.hpp"

#include "vox/errors.hpp"
#include "vox/parallel.hpp"

namespace vox {

ClipAnalysis analyze_clip(const AudioClip& clip, const DspParams& params) {
    ClipAnalysis a;
    a.intensity = track_intensity(clip, params);
    a.seg = detect_activity(clip, a.intensity, params);
    a.pitch = track_pitch(clip, params);
    attach_voiced_intervals(a.seg, a.pitch, clip.duration_s());
    a.periods = extract_periods(clip, a.pitch, params);
    return a;
}

FeatureVector extract_features_clip(const AudioClip& clip, const DspParams& params) {
    const ClipAnalysis a = analyze_clip(clip, params);
    return compute_features(clip, a.seg, a.pitch, a.intensity, a.periods, params);
}

namespace {

struct RowOutcome {
    bool ok = false;
    FeatureRow row;
    std::string reason;
};

ExtractionResult collect(std::vector<RowOutcome>& outcomes,
                         const std::vector<std::string>& ids) {
    ExtractionResult result;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].ok) {
            result.matrix.rows.push_back(std::move(outcomes[i].row));
        } else {
            result.rejections.push_back({ids[i], outcomes[i].reason});
        }
    }
    return result;
}

RowOutcome process_clip(const RecordingMeta& meta, const AudioClip& clip,
                        const DspParams& params) {
    RowOutcome out;
    try {
        FeatureRow row;
        row.meta = meta;
        row.sa_group = assign_group(meta.lsas_score);
        row.values = extract_features_clip(clip, params);
        out.row = std::move(row);
        out.ok = true;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NoSpeechDetected || e.code() == ErrorCode::NoVoicedRegion) {
            out.reason = e.what();
        } else {
            throw;
        }
    }
    return out;
}

}  // namespace

ExtractionResult extract_corpus(const Corpus& corpus, const DspParams& params, int jobs) {
    std::vector<RowOutcome> outcomes(corpus.entries.size());
    std::vector<std::string> ids(corpus.entries.size());
    for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
        ids[i] = corpus.entries[i].meta().recording_id;
    }
    parallel_for(corpus.entries.size(), jobs, [&](std::size_t i) {
        const AudioClip clip = corpus.entries[i].audio();
        outcomes[i] = process_clip(corpus.entries[i].meta(), clip, params);
    });
    return collect(outcomes, ids);
}

ExtractionResult extract_generated(const GeneratedCorpus& corpus, const DspParams& params,
                                   int jobs) {
    std::vector<RowOutcome> outcomes(corpus.rows.size());
    std::vector<std::string> ids(corpus.rows.size());
    for (std::size_t i = 0; i < corpus.rows.size(); ++i) ids[i] = corpus.rows[i].recording_id;
    parallel_for(corpus.rows.size(), jobs, [&](std::size_t i) {
        outcomes[i] = process_clip(corpus.rows[i], corpus.clips[i], params);
    });
    return collect(outcomes, ids);
}

}  // namespace vox
