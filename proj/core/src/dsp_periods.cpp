#include <algorithm>
#include <cmath>
#include <vector>

#include "vox/dsp.hpp"
#include "vox/errors.hpp"

namespace vox {

namespace {

struct VoicedRun {
    std::size_t first_frame;
    std::size_t last_frame;
};

// Parabolic refinement of a sample-grid maximum.  Returns (position, value)
// in fractional samples; falls back to the grid point at edges.
std::pair<double, double> refine_peak(const std::vector<double>& y, long p) {
    if (p <= 0 || p + 1 >= static_cast<long>(y.size())) {
        return {static_cast<double>(p), y[static_cast<std::size_t>(std::max(0L, p))]};
    }
    const double a = y[p - 1], b = y[p], c = y[p + 1];
    const double denom = a - 2.0 * b + c;
    if (denom >= 0.0) return {static_cast<double>(p), b};
    double delta = 0.5 * (a - c) / denom;
    delta = std::clamp(delta, -0.5, 0.5);
    const double value = b - 0.25 * (a - c) * delta;
    return {p + delta, value};
}

}  // namespace

PeriodSequence extract_periods(const AudioClip& clip, const PitchTrack& pitch,
                               const DspParams& /*params*/) {
    const auto& frames = pitch.frames;
    const double sr = static_cast<double>(clip.sample_rate_hz);

    // Maximal voiced runs with at least 3 consecutive voiced frames.
    std::vector<VoicedRun> runs;
    std::size_t i = 0;
    while (i < frames.size()) {
        if (frames[i].voiced) {
            std::size_t j = i;
            while (j + 1 < frames.size() && frames[j + 1].voiced) ++j;
            if (j - i + 1 >= 3) runs.push_back({i, j});
            i = j + 1;
        } else {
            ++i;
        }
    }
    if (runs.empty()) raise(ErrorCode::NoVoicedRegion, "no run of 3+ voiced frames");

    PeriodSequence seq;
    for (const auto& run : runs) {
        const std::size_t interval_start = seq.periods_s.size();
        const long begin = std::lround(frames[run.first_frame].time_s * sr);
        const long end = std::min<long>(
            std::lround((frames[run.last_frame].time_s + pitch.window_s) * sr),
            static_cast<long>(clip.samples.size()));
        if (end - begin < 4) continue;

        // Local period (in samples) at an absolute sample position, from the
        // nearest voiced frame of this run.
        auto local_period = [&](double pos) {
            const double t = pos / sr;
            std::size_t nearest = run.first_frame;
            double best = 1e300;
            for (std::size_t f = run.first_frame; f <= run.last_frame; ++f) {
                const double d = std::abs(frames[f].time_s + 0.5 * pitch.window_s - t);
                if (d < best) {
                    best = d;
                    nearest = f;
                }
            }
            return sr / frames[nearest].f0_hz;
        };

        // Dominant polarity over the run decides which extrema to track.
        double pos_max = 0.0, neg_max = 0.0;
        for (long n = begin; n < end; ++n) {
            pos_max = std::max(pos_max, clip.samples[n]);
            neg_max = std::max(neg_max, -clip.samples[n]);
        }
        const double polarity = pos_max >= neg_max ? 1.0 : -1.0;
        std::vector<double> y(end - begin);
        for (long n = begin; n < end; ++n) y[n - begin] = polarity * clip.samples[n];

        // The interval's frame boundaries can overhang silence on either side
        // (a voiced frame's window only partially covers speech), so seed at
        // the first substantial peak, not blindly in the first period.
        double interval_max = 0.0;
        for (long n = begin; n < end; ++n) interval_max = std::max(interval_max, y[n - begin]);
        if (interval_max <= 0.0) continue;
        const double amp_floor = 0.05 * interval_max;

        const double first_period = local_period(static_cast<double>(begin));
        long rise = begin;
        while (rise < end && y[rise - begin] < 0.3 * interval_max) ++rise;
        long search_end = std::min<long>(rise + std::lround(first_period) + 1, end);
        long peak = rise;
        for (long n = rise; n < search_end; ++n) {
            if (y[n - begin] > y[peak - begin]) peak = n;
        }
        auto [pos, val] = refine_peak(y, peak - begin);
        (void)val;
        double prev_pos = pos + begin;

        // Walk forward one expected period at a time, +/-20% search window.
        while (true) {
            const double period = local_period(prev_pos);
            const long win_lo = std::lround(prev_pos + 0.8 * period);
            const long win_hi = std::lround(prev_pos + 1.2 * period);
            if (win_hi >= end) break;
            if (win_lo >= win_hi) break;
            long best_n = win_lo;
            for (long n = win_lo; n <= win_hi; ++n) {
                if (y[n - begin] > y[best_n - begin]) best_n = n;
            }
            const long rel = best_n - begin;
            const bool genuine_peak =
                rel > 0 && rel + 1 < end - begin &&
                y[rel] >= y[rel - 1] && y[rel] >= y[rel + 1] &&
                (y[rel] > y[rel - 1] || y[rel] > y[rel + 1]);
            auto [next_rel, next_val] = refine_peak(y, rel);
            if (!genuine_peak || std::abs(next_val) < amp_floor) break;
            const double next_pos = next_rel + begin;
            seq.periods_s.push_back((next_pos - prev_pos) / sr);
            seq.peak_amplitudes.push_back(std::abs(next_val));
            prev_pos = next_pos;
        }
        if (seq.periods_s.size() > interval_start) seq.interval_starts.push_back(interval_start);
    }
    if (seq.periods_s.empty()) {
        raise(ErrorCode::NoVoicedRegion, "voiced regions too short for cycle picking");
    }
    return seq;
}

}  // namespace vox
