#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "vox/audio.hpp"

namespace vox {

// Analysis knobs with the toolkit defaults.  All of these surface in the
// CLI config file.
struct DspParams {
    double pitch_window_s = 0.040;
    double pitch_hop_s = 0.010;
    double pitch_floor_hz = 60.0;
    double pitch_ceil_hz = 500.0;
    double voicing_threshold = 0.45;  // on the normalized autocorrelation peak
    // Per-octave preference for shorter lags when peaks nearly tie.  Cycle
    // perturbations that alternate sign make a signal exactly 2T-periodic,
    // so r(2T) can slightly exceed r(T); the bias must outweigh that drop.
    double octave_bias = 0.05;

    double intensity_window_s = 0.032;
    double intensity_hop_s = 0.010;

    double vad_offset_db = 10.0;       // threshold above the noise floor
    double vad_peak_margin_db = 15.0;  // cap: never demand more than peak - margin
    double vad_min_level_db = 5.0;     // absolute floor so digital silence stays silent
    double vad_hangover_s = 0.080;
    double noise_floor_window_s = 0.100;  // clip prefix used for the noise floor

    double voice_break_min_s = 0.060;
};

struct PitchFrame {
    double time_s = 0.0;  // window start
    double f0_hz = 0.0;   // meaningful only when voiced
    bool voiced = false;
};

struct PitchTrack {
    std::vector<PitchFrame> frames;
    double window_s = 0.0;
    double hop_s = 0.0;
};

struct IntensityFrame {
    double time_s = 0.0;  // window start
    double level_db = 0.0;
};

struct IntensityTrack {
    std::vector<IntensityFrame> frames;
    double window_s = 0.0;
    double hop_s = 0.0;
};

struct Segmentation {
    double speech_onset_s = 0.0;
    double speech_end_s = 0.0;
    // Maximal sub-threshold runs strictly inside [onset, end], 10 ms frame
    // resolution, not hangover-bridged.
    std::vector<std::pair<double, double>> silent_gaps;  // (start_s, length_s)
    std::vector<std::pair<double, double>> voiced_intervals;  // (start_s, end_s)
};

struct PeriodSequence {
    // Gaps between successive located waveform maxima, per voiced interval.
    std::vector<double> periods_s;
    // Absolute (interpolated) sample value at the closing maximum of each
    // period, so the two sequences stay the same length.
    std::vector<double> peak_amplitudes;
    // Index into periods_s where each voiced interval's cycles begin;
    // consecutive-cycle differences are only meaningful within an interval.
    std::vector<std::size_t> interval_starts;
};

// dB level of an RMS amplitude, re 2e-5 of full scale, clamped at 0 dB.
double level_db_from_rms(double rms);

// Autocorrelation pitch tracker: 40 ms windows hopped 10 ms, normalized
// cross-correlation over lags covering [floor_hz, ceil_hz], parabolic
// interpolation around the winning peak.  A frame is voiced when the best
// normalized peak clears the voicing threshold and the frame has speech-like
// energy.  Throws ClipTooShort for clips shorter than one window.
PitchTrack track_pitch(const AudioClip& clip, const DspParams& params = {});

// 32 ms / 10 ms RMS intensity, 20*log10(rms / 2e-5) clamped below at 0 dB.
IntensityTrack track_intensity(const AudioClip& clip, const DspParams& params = {});

// Energy VAD: noise floor = median level over the first 100 ms, speech
// threshold = max(min(floor + offset, peak - margin), min_level).  Onset and
// end are refined inside the boundary frames with 4 ms subwindows, which
// keeps them within one hop of the true boundary even after digital silence.
// Throws NoSpeechDetected when no frame clears the threshold.
Segmentation detect_activity(const AudioClip& clip, const IntensityTrack& intensity,
                             const DspParams& params = {});

// Fills seg.voiced_intervals with maximal voiced runs of the pitch track
// (clamped to the speech span).
void attach_voiced_intervals(Segmentation& seg, const PitchTrack& pitch,
                             double clip_duration_s);

// Cycle peak picking: inside each maximal voiced interval, successive
// waveform maxima separated by about the local period (search window +/-20%),
// positions and values refined by parabolic interpolation.
// Throws NoVoicedRegion when no interval has >= 3 consecutive voiced frames.
PeriodSequence extract_periods(const AudioClip& clip, const PitchTrack& pitch,
                               const DspParams& params = {});

}  // namespace vox
