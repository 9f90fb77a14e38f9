#include <algorithm>
#include <cmath>

#include "vox/dsp.hpp"
#include "vox/errors.hpp"

namespace vox {

double level_db_from_rms(double rms) {
    if (rms <= 0.0) return 0.0;
    return std::max(0.0, 20.0 * std::log10(rms / 2e-5));
}

IntensityTrack track_intensity(const AudioClip& clip, const DspParams& params) {
    const double sr = static_cast<double>(clip.sample_rate_hz);
    const std::size_t window = static_cast<std::size_t>(std::lround(params.intensity_window_s * sr));
    const std::size_t hop = static_cast<std::size_t>(std::lround(params.intensity_hop_s * sr));
    if (window == 0 || hop == 0) raise(ErrorCode::InvalidSpec, "degenerate intensity framing");
    if (clip.samples.size() < window) {
        raise(ErrorCode::ClipTooShort, "clip shorter than one intensity window");
    }

    IntensityTrack track;
    track.window_s = window / sr;
    track.hop_s = hop / sr;
    for (std::size_t start = 0; start + window <= clip.samples.size(); start += hop) {
        double energy = 0.0;
        for (std::size_t i = start; i < start + window; ++i) {
            energy += clip.samples[i] * clip.samples[i];
        }
        const double rms = std::sqrt(energy / window);
        track.frames.push_back({start / sr, level_db_from_rms(rms)});
    }
    return track;
}

}  // namespace vox
