#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "vox/dsp.hpp"
#include "vox/manifest.hpp"

namespace vox {

// The 18 per-utterance acoustic features, in canonical column order.
enum FeatureIndex : std::size_t {
    kMinF0 = 0,
    kMaxF0,
    kMeanF0,
    kStdF0,
    kIntensityMin,
    kIntensityMax,
    kIntensityMean,
    kIntensityStd,
    kJitter,
    kShimmer,
    kJitterVoiceBreaks,
    kSilence50,
    kSilence100,
    kSilence150,
    kSilence200,
    kPromptToStart,
    kRelativeSilence,
    kDuration,
    kFeatureCount  // = 18
};

extern const std::array<const char*, kFeatureCount> kFeatureNames;

using FeatureVector = std::array<double, kFeatureCount>;

struct FeatureRow {
    RecordingMeta meta;
    SAGroup sa_group = SAGroup::Excluded;
    FeatureVector values{};
    std::array<bool, kFeatureCount> missing{};  // set by the exclude_value outlier mode
};

struct FeatureMatrix {
    std::vector<FeatureRow> rows;
};

// Computes the 18 features from per-clip analysis tracks.  All tracks must
// come from the same clip; seg must already carry voiced intervals.
// Throws NoVoicedRegion when F0/jitter are undefined for the utterance.
FeatureVector compute_features(const AudioClip& clip, const Segmentation& seg,
                               const PitchTrack& pitch, const IntensityTrack& intensity,
                               const PeriodSequence& periods, const DspParams& params = {});

enum class OutlierMode { ExcludeValue, Clip };

struct OutlierEvent {
    std::size_t row;
    std::size_t feature;
    double value;
    double lower;  // mean - k*std
    double upper;  // mean + k*std
};

struct OutlierReport {
    std::vector<OutlierEvent> events;
};

// Per-column 3-sigma policy (population std, strict inequality).  In
// ExcludeValue mode flagged cells become missing; in Clip mode they are
// winsorized to the boundary.  Requires >= 3 rows.
FeatureMatrix apply_outlier_policy(const FeatureMatrix& matrix, double k, OutlierMode mode,
                                   OutlierReport* report = nullptr);

struct NormStats {
    struct PerFeature {
        double mean = 0.0;
        double std = 1.0;  // sample (n-1) convention
        bool degenerate = false;
    };
    // index 0 = male, 1 = female; empty std vector marks an absent gender
    std::array<std::vector<PerFeature>, 2> per_gender;

    bool has_gender(Gender g) const { return !per_gender[g == Gender::Female].empty(); }
};

// Per-gender per-feature mean/std from the given training rows only.
// Each gender present in the subset needs >= 2 rows.
NormStats fit_norm_stats(const FeatureMatrix& matrix, const std::vector<std::size_t>& rows);

// z-scores every value by its gender's stats; degenerate features map to 0.
// Throws UnknownGender when a row's gender is not covered by the stats.
FeatureMatrix normalize(const FeatureMatrix& matrix, const NormStats& stats);

// CSV export/import in the documented schema (6 meta columns + 18 features,
// 6 significant digits, empty cell = missing value).
std::string matrix_to_csv(const FeatureMatrix& matrix);
FeatureMatrix matrix_from_csv(const std::string& csv_text);

}  // namespace vox
