#include <algorithm>
#include <cmath>
#include <vector>

#include "dsp_internal.hpp"
#include "vox/dsp.hpp"
#include "vox/errors.hpp"

namespace vox {

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Level of a subrange, same dB convention as the frame track.
double subrange_level(const AudioClip& clip, std::size_t begin, std::size_t end) {
    double energy = 0.0;
    for (std::size_t i = begin; i < end; ++i) energy += clip.samples[i] * clip.samples[i];
    return level_db_from_rms(std::sqrt(energy / static_cast<double>(end - begin)));
}

}  // namespace

double speech_threshold_db(const std::vector<double>& levels, const std::vector<double>& times,
                           double window_s, const DspParams& params) {
    std::vector<double> prefix;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (times[i] + window_s <= params.noise_floor_window_s + 1e-9) prefix.push_back(levels[i]);
    }
    if (prefix.empty()) prefix.push_back(levels.front());
    const double noise_floor = median(prefix);
    const double peak = *std::max_element(levels.begin(), levels.end());
    // The noise-floor rule alone fails when speech starts at t = 0 (the
    // "floor" is speech); the peak-relative cap keeps such clips detectable,
    // and the absolute minimum keeps digital silence undetected.
    return std::max(std::min(noise_floor + params.vad_offset_db, peak - params.vad_peak_margin_db),
                    params.vad_min_level_db);
}

Segmentation detect_activity(const AudioClip& clip, const IntensityTrack& intensity,
                             const DspParams& params) {
    const auto& frames = intensity.frames;
    if (frames.empty()) raise(ErrorCode::ClipTooShort, "empty intensity track");

    std::vector<double> levels(frames.size()), times(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        levels[i] = frames[i].level_db;
        times[i] = frames[i].time_s;
    }
    const double threshold = speech_threshold_db(levels, times, intensity.window_s, params);

    std::vector<bool> speech(frames.size());
    bool any = false;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        speech[i] = levels[i] >= threshold;
        any = any || speech[i];
    }
    if (!any) raise(ErrorCode::NoSpeechDetected, "no frame above the speech threshold");

    // Hangover smoothing: bridge short gaps for the onset/end pass only.
    std::vector<bool> bridged = speech;
    {
        const std::size_t max_bridge =
            static_cast<std::size_t>(std::floor(params.vad_hangover_s / intensity.hop_s + 1e-9));
        std::size_t i = 0;
        while (i < bridged.size()) {
            if (!bridged[i]) { ++i; continue; }
            std::size_t j = i + 1;
            while (j < bridged.size() && !bridged[j]) ++j;
            if (j < bridged.size() && j - i - 1 > 0 && j - i - 1 < max_bridge) {
                for (std::size_t g = i + 1; g < j; ++g) bridged[g] = true;
            }
            i = j;
        }
    }

    std::size_t first = 0;
    while (!bridged[first]) ++first;
    std::size_t last = frames.size() - 1;
    while (!bridged[last]) --last;

    const double sr = static_cast<double>(clip.sample_rate_hz);
    const std::size_t win = static_cast<std::size_t>(std::lround(intensity.window_s * sr));

    // Refine the boundary inside the first/last speech frame: the frame grid
    // alone is only window-accurate when the lead-in is digital silence.
    auto refine = [&](std::size_t frame_idx, bool from_start) {
        const std::size_t frame_begin = static_cast<std::size_t>(std::lround(times[frame_idx] * sr));
        const std::size_t sub = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.004 * sr)));
        const std::size_t step = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.001 * sr)));
        const std::size_t frame_end = std::min(frame_begin + win, clip.samples.size());
        if (frame_end < frame_begin + sub) {
            return from_start ? times[frame_idx] : times[frame_idx] + intensity.window_s;
        }
        if (from_start) {
            for (std::size_t b = frame_begin; b + sub <= frame_end; b += step) {
                if (subrange_level(clip, b, b + sub) >= threshold) return b / sr;
            }
            return times[frame_idx];
        }
        for (std::size_t off = frame_end - sub - frame_begin;; off -= step) {
            const std::size_t b = frame_begin + off;
            if (subrange_level(clip, b, b + sub) >= threshold) return (b + sub) / sr;
            if (off < step) break;
        }
        return times[frame_idx] + intensity.window_s;
    };

    Segmentation seg;
    seg.speech_onset_s = refine(first, true);
    seg.speech_end_s = refine(last, false);
    if (seg.speech_end_s < seg.speech_onset_s) seg.speech_end_s = seg.speech_onset_s;

    // Silent gaps between speech frames, full frame resolution, no bridging.
    std::size_t i = first;
    while (i <= last) {
        if (!speech[i]) {
            std::size_t j = i;
            while (j + 1 <= last && !speech[j + 1]) ++j;
            const double start = times[i];
            const double length = (times[j] + intensity.window_s) - start;
            seg.silent_gaps.emplace_back(start, length);
            i = j + 1;
        } else {
            ++i;
        }
    }
    return seg;
}

void attach_voiced_intervals(Segmentation& seg, const PitchTrack& pitch,
                             double clip_duration_s) {
    seg.voiced_intervals.clear();
    const auto& frames = pitch.frames;
    std::size_t i = 0;
    while (i < frames.size()) {
        if (frames[i].voiced) {
            std::size_t j = i;
            while (j + 1 < frames.size() && frames[j + 1].voiced) ++j;
            double start = frames[i].time_s;
            double end = std::min(frames[j].time_s + pitch.window_s, clip_duration_s);
            // keep only the part that overlaps the speech span
            start = std::max(start, seg.speech_onset_s);
            end = std::min(end, seg.speech_end_s);
            if (end > start) seg.voiced_intervals.emplace_back(start, end);
            i = j + 1;
        } else {
            ++i;
        }
    }
}

}  // namespace vox
