#include "vox/synth.hpp"

#include <cmath>

#include "vox/errors.hpp"

namespace vox {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDbRef = 2e-5;

void validate_spec(const SynthSpec& spec) {
    if (spec.f0_hz < 60.0 || spec.f0_hz > 500.0) {
        raise(ErrorCode::InvalidSpec, "f0 outside [60, 500] Hz");
    }
    if (spec.jitter_frac < 0.0 || spec.jitter_frac >= 0.5) {
        raise(ErrorCode::InvalidSpec, "jitter_frac outside [0, 0.5)");
    }
    if (spec.shimmer_frac < 0.0 || spec.shimmer_frac >= 0.5) {
        raise(ErrorCode::InvalidSpec, "shimmer_frac outside [0, 0.5)");
    }
    if (spec.leading_silence_s < 0.0) raise(ErrorCode::InvalidSpec, "negative leading silence");
    if (spec.total_speech_s <= 0.0) raise(ErrorCode::InvalidSpec, "non-positive speech span");
    if (spec.f0_drift_frac < 0.0 || spec.f0_drift_frac >= 0.9) {
        raise(ErrorCode::InvalidSpec, "f0_drift_frac outside [0, 0.9)");
    }
    if (spec.f0_hz * (1.0 - spec.f0_drift_frac) < 60.0 ||
        spec.f0_hz * (1.0 + spec.f0_drift_frac) > 500.0) {
        raise(ErrorCode::InvalidSpec, "f0 drift leaves the [60, 500] Hz range");
    }
    if (spec.duty_frac < 0.1 || spec.duty_frac > 0.8) {
        raise(ErrorCode::InvalidSpec, "duty_frac outside [0.1, 0.8]");
    }
    double prev_end = 0.0;
    for (const auto& [onset, len] : spec.internal_pauses) {
        if (onset < 0.0 || len <= 0.0 || onset + len > spec.total_speech_s) {
            raise(ErrorCode::InvalidSpec, "pause outside the speech span");
        }
        if (onset < prev_end) raise(ErrorCode::InvalidSpec, "pauses overlap or are unsorted");
        prev_end = onset + len;
    }
}
}  // namespace

AudioClip synthesize_utterance(const SynthSpec& spec, int sample_rate_hz) {
    validate_spec(spec);
    if (sample_rate_hz < 4000) raise(ErrorCode::InvalidSpec, "sample rate too low");

    const double sr = static_cast<double>(sample_rate_hz);
    const double lead = spec.leading_silence_s;
    const double nominal_period = 1.0 / spec.f0_hz;
    const double tail_pad_s = 0.05;

    AudioClip clip;
    clip.sample_rate_hz = sample_rate_hz;
    const std::size_t total_samples =
        static_cast<std::size_t>(std::ceil((lead + spec.total_speech_s + tail_pad_s) * sr));
    clip.samples.assign(total_samples, 0.0);

    // One raised-cosine bump per glottal cycle, at exact (fractional) pulse
    // times so period perturbations are not quantized to the sample grid.
    double pulse_time = 0.0;
    long cycle = 0;
    while (true) {
        // linear intonation ramp from f0*(1-drift) to f0*(1+drift)
        const double ramp =
            1.0 + spec.f0_drift_frac * (2.0 * pulse_time / spec.total_speech_s - 1.0);
        const double local_period = nominal_period / ramp;
        const double bump_width = spec.duty_frac * local_period;
        if (pulse_time + bump_width > spec.total_speech_s + 1e-12) break;

        const double amp = 1.0 + (cycle % 2 == 0 ? spec.shimmer_frac : -spec.shimmer_frac);
        const double start_abs = lead + pulse_time;
        const long n0 = static_cast<long>(std::ceil(start_abs * sr));
        const long n1 = static_cast<long>(std::floor((start_abs + bump_width) * sr));
        for (long n = n0; n <= n1 && n < static_cast<long>(total_samples); ++n) {
            const double u = n / sr - start_abs;
            const double s = std::sin(kPi * u / bump_width);
            clip.samples[static_cast<std::size_t>(n)] += amp * s * s;
        }
        const double period =
            local_period * (1.0 + (cycle % 2 == 0 ? spec.jitter_frac : -spec.jitter_frac));
        pulse_time += period;
        ++cycle;
    }
    if (cycle == 0) raise(ErrorCode::InvalidSpec, "speech span shorter than one cycle");

    // Silence the internal pauses exactly at their sample ranges.
    for (const auto& [onset, len] : spec.internal_pauses) {
        const long p0 = static_cast<long>(std::ceil((lead + onset) * sr));
        const long p1 = static_cast<long>(std::floor((lead + onset + len) * sr));
        for (long n = p0; n < p1 && n < static_cast<long>(total_samples); ++n) {
            if (n >= 0) clip.samples[static_cast<std::size_t>(n)] = 0.0;
        }
    }

    // Scale the speech span (pauses excluded) to the requested level.
    const long s0 = static_cast<long>(std::ceil(lead * sr));
    const long s1 = static_cast<long>(std::floor((lead + spec.total_speech_s) * sr));
    double energy = 0.0;
    long count = 0;
    {
        std::size_t pause_idx = 0;
        for (long n = s0; n < s1 && n < static_cast<long>(total_samples); ++n) {
            const double t = n / sr - lead;
            while (pause_idx < spec.internal_pauses.size() &&
                   t >= spec.internal_pauses[pause_idx].first + spec.internal_pauses[pause_idx].second) {
                ++pause_idx;
            }
            const bool in_pause = pause_idx < spec.internal_pauses.size() &&
                                  t >= spec.internal_pauses[pause_idx].first;
            if (in_pause) continue;
            energy += clip.samples[static_cast<std::size_t>(n)] * clip.samples[static_cast<std::size_t>(n)];
            ++count;
        }
    }
    if (count == 0 || energy <= 0.0) {
        raise(ErrorCode::InvalidSpec, "pauses leave no speech content");
    }
    const double rms = std::sqrt(energy / count);
    const double target_rms = kDbRef * std::pow(10.0, spec.intensity_db / 20.0);
    const double gain = target_rms / rms;

    double peak = 0.0;
    for (auto& x : clip.samples) {
        x *= gain;
        peak = std::max(peak, std::abs(x));
    }
    if (peak > 1.0) {
        raise(ErrorCode::InvalidSpec, "requested intensity clips full scale");
    }
    return clip;
}

}  // namespace vox
