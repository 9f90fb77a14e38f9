#include <algorithm>
#include <cmath>
#include <vector>

#include "dsp_internal.hpp"
#include "vox/dsp.hpp"
#include "vox/errors.hpp"

namespace vox {

namespace {

struct PeakChoice {
    int lag = 0;
    double value = 0.0;
    double score = 0.0;
};

}  // namespace

PitchTrack track_pitch(const AudioClip& clip, const DspParams& params) {
    if (params.pitch_floor_hz >= params.pitch_ceil_hz || params.pitch_floor_hz <= 0.0) {
        raise(ErrorCode::InvalidSpec, "pitch floor must be positive and below the ceiling");
    }
    const double sr = static_cast<double>(clip.sample_rate_hz);
    const int window = static_cast<int>(std::lround(params.pitch_window_s * sr));
    const int hop = static_cast<int>(std::lround(params.pitch_hop_s * sr));
    if (window <= 0 || hop <= 0) raise(ErrorCode::InvalidSpec, "degenerate pitch framing");
    if (static_cast<int>(clip.samples.size()) < window) {
        raise(ErrorCode::ClipTooShort, "clip shorter than one pitch window");
    }

    const int lag_min = std::max(2, static_cast<int>(std::ceil(sr / params.pitch_ceil_hz)));
    const int lag_max =
        std::min(window - 2, static_cast<int>(std::floor(sr / params.pitch_floor_hz)));
    if (lag_max <= lag_min + 1) {
        raise(ErrorCode::InvalidSpec, "pitch range too narrow for the window");
    }

    PitchTrack track;
    track.window_s = window / sr;
    track.hop_s = hop / sr;

    const int n_frames = static_cast<int>((clip.samples.size() - window) / hop) + 1;
    track.frames.reserve(n_frames);

    std::vector<double> x(window);
    std::vector<double> sq_prefix(window + 1);
    std::vector<double> r(lag_max + 2, 0.0);
    std::vector<double> frame_levels(n_frames);
    std::vector<double> frame_times(n_frames);

    // First pass: frame levels, for the energy gate.
    for (int f = 0; f < n_frames; ++f) {
        const std::size_t start = static_cast<std::size_t>(f) * hop;
        double energy = 0.0;
        for (int i = 0; i < window; ++i) {
            const double v = clip.samples[start + i];
            energy += v * v;
        }
        frame_levels[f] = level_db_from_rms(std::sqrt(energy / window));
        frame_times[f] = start / sr;
    }
    const double energy_gate = speech_threshold_db(frame_levels, frame_times, window / sr, params);

    for (int f = 0; f < n_frames; ++f) {
        const std::size_t start = static_cast<std::size_t>(f) * hop;
        PitchFrame out;
        out.time_s = frame_times[f];

        if (frame_levels[f] < energy_gate) {
            track.frames.push_back(out);
            continue;
        }

        // Remove the frame mean so DC does not masquerade as correlation.
        double mean = 0.0;
        for (int i = 0; i < window; ++i) mean += clip.samples[start + i];
        mean /= window;
        for (int i = 0; i < window; ++i) x[i] = clip.samples[start + i] - mean;

        sq_prefix[0] = 0.0;
        for (int i = 0; i < window; ++i) sq_prefix[i + 1] = sq_prefix[i] + x[i] * x[i];
        const double total_energy = sq_prefix[window];
        if (total_energy <= 0.0) {
            track.frames.push_back(out);
            continue;
        }

        // Normalized cross-correlation over the lag range (plus one lag of
        // margin on each side for peak tests and interpolation).
        for (int lag = std::max(1, lag_min - 1); lag <= std::min(window - 1, lag_max + 1); ++lag) {
            double num = 0.0;
            const int n = window - lag;
            for (int i = 0; i < n; ++i) num += x[i] * x[i + lag];
            const double e1 = sq_prefix[n];
            const double e2 = total_energy - sq_prefix[lag];
            r[lag] = (e1 > 0.0 && e2 > 0.0) ? num / std::sqrt(e1 * e2) : 0.0;
        }

        // Candidate peaks: local maxima above the voicing threshold.  A small
        // per-octave bias toward shorter lags breaks the exact ties a strictly
        // periodic signal produces at integer multiples of its period; any
        // remaining exact tie goes to the longer lag (the lower f0).
        PeakChoice best;
        bool have = false;
        for (int lag = lag_min; lag <= lag_max; ++lag) {
            if (r[lag] < params.voicing_threshold) continue;
            if (!(r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1])) continue;
            const double score =
                r[lag] - params.octave_bias * std::log2(static_cast<double>(lag) / lag_min);
            if (!have || score > best.score || (score == best.score && lag > best.lag)) {
                best = {lag, r[lag], score};
                have = true;
            }
        }
        if (have) {
            // Parabolic interpolation around the winning lag.
            double delta = 0.0;
            const double denom = r[best.lag - 1] - 2.0 * r[best.lag] + r[best.lag + 1];
            if (denom < 0.0) {
                delta = 0.5 * (r[best.lag - 1] - r[best.lag + 1]) / denom;
                delta = std::clamp(delta, -0.5, 0.5);
            }
            double f0 = sr / (best.lag + delta);
            f0 = std::clamp(f0, params.pitch_floor_hz, params.pitch_ceil_hz);
            out.voiced = true;
            out.f0_hz = f0;
        }
        track.frames.push_back(out);
    }
    return track;
}

}  // namespace vox
