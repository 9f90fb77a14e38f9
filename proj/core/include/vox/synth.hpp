#pragma once

#include <utility>
#include <vector>

#include "vox/audio.hpp"

namespace vox {

// Deterministic test-signal description.  Perturbations alternate sign
// cycle by cycle (not random), so jitter and shimmer have exact closed
// forms: measured local jitter = 2 * jitter_frac, shimmer likewise.
struct SynthSpec {
    double f0_hz = 200.0;
    double jitter_frac = 0.0;   // period i scaled by 1 + (-1)^i * jitter_frac
    double shimmer_frac = 0.0;  // pulse i scaled by 1 + (-1)^i * shimmer_frac
    double intensity_db = 70.0; // target level, dB re 2e-5 full scale
    double leading_silence_s = 0.0;
    // (onset_s, length_s) measured from speech start; disjoint, ordered.
    std::vector<std::pair<double, double>> internal_pauses;
    double total_speech_s = 1.0;
    // Slow intonation: f0 ramps linearly from f0*(1-drift) to f0*(1+drift)
    // across the speech span.  Zero (the default) keeps the jitter/shimmer
    // closed forms exact.
    double f0_drift_frac = 0.0;
    // Fraction of the period each glottal bump occupies.
    double duty_frac = 0.4;
};

// Renders a glottal-pulse-like waveform: a pulse train with one smooth
// raised-cosine bump per cycle (bump width 0.4 of the nominal period),
// digital silence for the lead-in and each internal pause, the whole
// signal scaled so the speech-span RMS hits intensity_db.
// Errors: InvalidSpec (f0 outside [60,500], pauses outside the span,
// level that would clip, ...).
AudioClip synthesize_utterance(const SynthSpec& spec, int sample_rate_hz);

}  // namespace vox
