#pragma once

#include <string>
#include <vector>

#include "vox/config.hpp"
#include "vox/dsp.hpp"
#include "vox/features.hpp"
#include "vox/manifest.hpp"
#include "vox/synth.hpp"

namespace vox {

// All per-clip analysis products in one pass.
struct ClipAnalysis {
    IntensityTrack intensity;
    PitchTrack pitch;
    Segmentation seg;
    PeriodSequence periods;
};

ClipAnalysis analyze_clip(const AudioClip& clip, const DspParams& params = {});

// analyze + compute_features in one call (tests and the extract command).
FeatureVector extract_features_clip(const AudioClip& clip, const DspParams& params = {});

struct ExtractionResult {
    FeatureMatrix matrix;
    struct Rejection {
        std::string recording_id;
        std::string reason;
    };
    std::vector<Rejection> rejections;
};

// Feature extraction over a corpus, per-clip parallel, row order preserved.
// Utterances failing with NoSpeechDetected / NoVoicedRegion are reported as
// rejections; any other error propagates.
ExtractionResult extract_corpus(const Corpus& corpus, const DspParams& params, int jobs);

// In-memory generated corpus (the synth command writes it to disk; the
// acceptance suite consumes it directly).
struct GeneratedCorpus {
    std::vector<RecordingMeta> rows;
    std::vector<AudioClip> clips;  // parallel to rows
};

GeneratedCorpus generate_corpus(const SynthConfig& config, std::uint64_t seed, int jobs = 1);

// Writes <dir>/<recording_id>.wav for every row plus <dir>/manifest.csv.
void write_corpus(const GeneratedCorpus& corpus, const std::string& dir);

// Extraction without touching disk.
ExtractionResult extract_generated(const GeneratedCorpus& corpus, const DspParams& params,
                                   int jobs);

}  // namespace vox
