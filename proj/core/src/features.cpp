#include "vox/features.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vox/errors.hpp"
#include "vox/io_util.hpp"

namespace vox {

const std::array<const char*, kFeatureCount> kFeatureNames = {
    "min_f0",        "max_f0",        "mean_f0",        "std_f0",
    "intensity_min", "intensity_max", "intensity_mean", "intensity_std",
    "jitter",        "shimmer",       "jitter_voice_breaks",
    "silence_50",    "silence_100",   "silence_150",    "silence_200",
    "prompt_to_start", "relative_silence", "duration"};

namespace {

struct Moments {
    double min = 0.0, max = 0.0, mean = 0.0, std = 0.0;
};

Moments moments(const std::vector<double>& v) {
    Moments m;
    m.min = *std::min_element(v.begin(), v.end());
    m.max = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    m.mean = sum / v.size();
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - m.mean) * (x - m.mean);
        m.std = std::sqrt(ss / (v.size() - 1));
    }
    return m;
}

// Mean |x_i - x_{i-1}| over consecutive entries inside each interval,
// divided by the overall mean: the local perturbation quotient used for
// both jitter (periods) and shimmer (cycle peak amplitudes).
double local_perturbation(const std::vector<double>& values,
                          const std::vector<std::size_t>& interval_starts) {
    double diff_sum = 0.0;
    std::size_t diff_count = 0;
    for (std::size_t k = 0; k < interval_starts.size(); ++k) {
        const std::size_t begin = interval_starts[k];
        const std::size_t end =
            (k + 1 < interval_starts.size()) ? interval_starts[k + 1] : values.size();
        for (std::size_t i = begin + 1; i < end; ++i) {
            diff_sum += std::abs(values[i] - values[i - 1]);
            ++diff_count;
        }
    }
    if (diff_count == 0) raise(ErrorCode::NoVoicedRegion, "fewer than two cycles");
    double mean = 0.0;
    for (double x : values) mean += x;
    mean /= values.size();
    if (mean <= 0.0) raise(ErrorCode::NoVoicedRegion, "degenerate cycle sequence");
    return (diff_sum / diff_count) / mean;
}

}  // namespace

FeatureVector compute_features(const AudioClip& clip, const Segmentation& seg,
                               const PitchTrack& pitch, const IntensityTrack& intensity,
                               const PeriodSequence& periods, const DspParams& params) {
    (void)clip;
    const double onset = seg.speech_onset_s;
    const double end = seg.speech_end_s;
    if (end <= onset) raise(ErrorCode::NoSpeechDetected, "empty speech span");

    FeatureVector f{};

    // F0 statistics over voiced frames whose window lies inside the span.
    std::vector<double> f0;
    for (const auto& frame : pitch.frames) {
        if (!frame.voiced) continue;
        if (frame.time_s + 1e-9 >= onset - pitch.window_s &&
            frame.time_s + pitch.window_s <= end + pitch.window_s) {
            f0.push_back(frame.f0_hz);
        }
    }
    if (f0.empty()) raise(ErrorCode::NoVoicedRegion, "no voiced frames in the speech span");
    const Moments mf0 = moments(f0);
    f[kMinF0] = mf0.min;
    f[kMaxF0] = mf0.max;
    f[kMeanF0] = mf0.mean;
    f[kStdF0] = mf0.std;

    // Intensity statistics over frames inside the span.  Frames lying inside
    // detected silent gaps are excluded: the reference pipeline strips
    // non-speaking stretches before measuring intensity, and including them
    // would let a single pause drag the minimum to the clamp floor.
    auto in_gap = [&seg](double t0, double t1) {
        for (const auto& [start, length] : seg.silent_gaps) {
            if (t0 >= start - 1e-9 && t1 <= start + length + 1e-9) return true;
        }
        return false;
    };
    std::vector<double> levels;
    for (const auto& frame : intensity.frames) {
        if (frame.time_s + 1e-9 >= onset && frame.time_s + intensity.window_s <= end + 1e-9 &&
            !in_gap(frame.time_s, frame.time_s + intensity.window_s)) {
            levels.push_back(frame.level_db);
        }
    }
    if (levels.empty()) {
        // very short utterance: fall back to any frame overlapping the span
        for (const auto& frame : intensity.frames) {
            if (frame.time_s < end && frame.time_s + intensity.window_s > onset) {
                levels.push_back(frame.level_db);
            }
        }
    }
    if (levels.empty()) raise(ErrorCode::NoSpeechDetected, "no intensity frames in the span");
    const Moments mint = moments(levels);
    f[kIntensityMin] = mint.min;
    f[kIntensityMax] = mint.max;
    f[kIntensityMean] = mint.mean;
    f[kIntensityStd] = mint.std;

    f[kJitter] = local_perturbation(periods.periods_s, periods.interval_starts);
    f[kShimmer] = local_perturbation(periods.peak_amplitudes, periods.interval_starts);

    // Voice breaks: maximal unvoiced runs of at least voice_break_min_s,
    // strictly between voiced frames inside the speech span.
    {
        std::vector<const PitchFrame*> span_frames;
        for (const auto& frame : pitch.frames) {
            if (frame.time_s + 1e-9 >= onset - pitch.window_s && frame.time_s <= end + 1e-9) {
                span_frames.push_back(&frame);
            }
        }
        int breaks = 0;
        std::size_t i = 0;
        while (i < span_frames.size() && !span_frames[i]->voiced) ++i;
        while (i < span_frames.size()) {
            if (!span_frames[i]->voiced) {
                std::size_t j = i;
                while (j + 1 < span_frames.size() && !span_frames[j + 1]->voiced) ++j;
                const bool closed = j + 1 < span_frames.size();  // voiced frame follows
                const double run_s = (j - i + 1) * pitch.hop_s;
                if (closed && run_s + 1e-9 >= params.voice_break_min_s) ++breaks;
                i = j + 1;
            } else {
                ++i;
            }
        }
        f[kJitterVoiceBreaks] = static_cast<double>(breaks);
    }

    // Silent-gap count family and totals.
    double gap_total = 0.0;
    int counts[4] = {0, 0, 0, 0};
    static constexpr double kThresholds[4] = {0.050, 0.100, 0.150, 0.200};
    for (const auto& [start, length] : seg.silent_gaps) {
        (void)start;
        gap_total += length;
        for (int t = 0; t < 4; ++t) {
            if (length + 1e-9 >= kThresholds[t]) ++counts[t];
        }
    }
    f[kSilence50] = counts[0];
    f[kSilence100] = counts[1];
    f[kSilence150] = counts[2];
    f[kSilence200] = counts[3];

    f[kPromptToStart] = onset;
    f[kDuration] = end - onset;
    f[kRelativeSilence] = std::clamp(gap_total / (end - onset), 0.0, 1.0);
    return f;
}

FeatureMatrix apply_outlier_policy(const FeatureMatrix& matrix, double k, OutlierMode mode,
                                   OutlierReport* report) {
    if (matrix.rows.size() < 3) raise(ErrorCode::TooFewRows, "outlier policy needs >= 3 rows");
    FeatureMatrix out = matrix;
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& row : matrix.rows) {
            if (row.missing[c]) continue;
            sum += row.values[c];
            ++n;
        }
        if (n == 0) continue;
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& row : matrix.rows) {
            if (row.missing[c]) continue;
            ss += (row.values[c] - mean) * (row.values[c] - mean);
        }
        const double std_pop = std::sqrt(ss / n);  // population convention
        if (std_pop == 0.0) continue;              // all-equal column: nothing exceeds
        const double lo = mean - k * std_pop;
        const double hi = mean + k * std_pop;
        for (std::size_t r = 0; r < out.rows.size(); ++r) {
            if (out.rows[r].missing[c]) continue;
            const double x = out.rows[r].values[c];
            if (std::abs(x - mean) > k * std_pop) {  // strictly beyond the boundary
                if (report) report->events.push_back({r, c, x, lo, hi});
                if (mode == OutlierMode::ExcludeValue) {
                    out.rows[r].missing[c] = true;
                } else {
                    out.rows[r].values[c] = std::clamp(x, lo, hi);
                }
            }
        }
    }
    return out;
}

NormStats fit_norm_stats(const FeatureMatrix& matrix, const std::vector<std::size_t>& rows) {
    NormStats stats;
    for (int g = 0; g < 2; ++g) {
        const Gender gender = g == 0 ? Gender::Male : Gender::Female;
        std::vector<std::size_t> members;
        for (std::size_t r : rows) {
            if (matrix.rows.at(r).meta.gender == gender) members.push_back(r);
        }
        if (members.empty()) continue;
        if (members.size() < 2) {
            raise(ErrorCode::DegenerateGenderGroup,
                  std::string(to_string(gender)) + " group has a single training row");
        }
        auto& dest = stats.per_gender[g];
        dest.resize(kFeatureCount);
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
            double sum = 0.0;
            std::size_t n = 0;
            for (std::size_t r : members) {
                if (matrix.rows[r].missing[c]) continue;
                sum += matrix.rows[r].values[c];
                ++n;
            }
            if (n < 2) {
                dest[c].degenerate = true;
                continue;
            }
            const double mean = sum / n;
            double ss = 0.0;
            for (std::size_t r : members) {
                if (matrix.rows[r].missing[c]) continue;
                ss += (matrix.rows[r].values[c] - mean) * (matrix.rows[r].values[c] - mean);
            }
            const double sd = std::sqrt(ss / (n - 1));
            dest[c].mean = mean;
            dest[c].std = sd;
            dest[c].degenerate = sd < 1e-9 * std::max(1.0, std::abs(mean));
        }
    }
    if (stats.per_gender[0].empty() && stats.per_gender[1].empty()) {
        raise(ErrorCode::DegenerateGenderGroup, "no training rows");
    }
    return stats;
}

FeatureMatrix normalize(const FeatureMatrix& matrix, const NormStats& stats) {
    FeatureMatrix out = matrix;
    for (auto& row : out.rows) {
        const int g = row.meta.gender == Gender::Female ? 1 : 0;
        if (stats.per_gender[g].empty()) {
            raise(ErrorCode::UnknownGender,
                  std::string(to_string(row.meta.gender)) + " not covered by the fitted stats");
        }
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
            if (row.missing[c]) continue;
            const auto& pf = stats.per_gender[g][c];
            row.values[c] = pf.degenerate ? 0.0 : (row.values[c] - pf.mean) / pf.std;
        }
    }
    return out;
}

std::string matrix_to_csv(const FeatureMatrix& matrix) {
    std::string out = "recording_id,speaker_id,gender,lsas_score,sa_group,utterance_type";
    for (const char* name : kFeatureNames) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (const auto& row : matrix.rows) {
        out += row.meta.recording_id;
        out += ',';
        out += row.meta.speaker_id;
        out += ',';
        out += to_string(row.meta.gender);
        out += ',';
        out += std::to_string(row.meta.lsas_score);
        out += ',';
        out += to_string(row.sa_group);
        out += ',';
        out += to_string(row.meta.utterance_type);
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
            out += ',';
            if (!row.missing[c]) out += format_double(row.values[c], 6);
        }
        out += '\n';
    }
    return out;
}

FeatureMatrix matrix_from_csv(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) raise(ErrorCode::MalformedManifest, "empty feature CSV");

    FeatureMatrix matrix;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ss(line);
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        if (fields.size() != 6 + kFeatureCount) {
            raise(ErrorCode::MalformedManifest,
                  "feature CSV line " + std::to_string(line_no) + ": wrong column count");
        }
        FeatureRow row;
        row.meta.recording_id = fields[0];
        row.meta.speaker_id = fields[1];
        if (fields[2] == "male") {
            row.meta.gender = Gender::Male;
        } else if (fields[2] == "female") {
            row.meta.gender = Gender::Female;
        } else {
            raise(ErrorCode::MalformedManifest, "bad gender '" + fields[2] + "'");
        }
        row.meta.lsas_score = std::stoi(fields[3]);
        row.sa_group = assign_group(row.meta.lsas_score);
        if (fields[5] == "refusal") {
            row.meta.utterance_type = UtteranceType::Refusal;
        } else if (fields[5] == "consent") {
            row.meta.utterance_type = UtteranceType::Consent;
        } else {
            row.meta.utterance_type = UtteranceType::Unknown;
        }
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
            const std::string& cell = fields[6 + c];
            if (cell.empty()) {
                row.missing[c] = true;
            } else {
                row.values[c] = std::stod(cell);
            }
        }
        matrix.rows.push_back(std::move(row));
    }
    if (matrix.rows.empty()) raise(ErrorCode::MalformedManifest, "feature CSV has no rows");
    return matrix;
}

}  // namespace vox
