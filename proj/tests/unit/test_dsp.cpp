#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "../support/fixtures.hpp"
#include "vox/dsp.hpp"
#include "vox/errors.hpp"
#include "vox/pipeline.hpp"
#include "vox/synth.hpp"

using namespace vox;

namespace {

double median_voiced_f0(const PitchTrack& track) {
    std::vector<double> v;
    for (const auto& f : track.frames) {
        if (f.voiced) v.push_back(f.f0_hz);
    }
    REQUIRE(!v.empty());
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

double voiced_fraction(const PitchTrack& track) {
    std::size_t voiced = 0;
    for (const auto& f : track.frames) voiced += f.voiced ? 1 : 0;
    return static_cast<double>(voiced) / track.frames.size();
}

}  // namespace

TEST_CASE("pitch tracker recovers synthetic f0 within 2 Hz") {
    for (double f0 : {100.0, 150.0, 200.0, 300.0}) {
        const AudioClip clip = fixtures::tone(f0, 1.0, 48000);
        const PitchTrack track = track_pitch(clip);
        CHECK(voiced_fraction(track) >= 0.95);
        CHECK(std::abs(median_voiced_f0(track) - f0) <= 2.0);
    }
}

TEST_CASE("pitch tracker at 16 kHz stays accurate") {
    for (double f0 : {110.0, 196.0}) {
        const AudioClip clip = fixtures::tone(f0, 1.0, 16000);
        const PitchTrack track = track_pitch(clip);
        CHECK(std::abs(median_voiced_f0(track) - f0) <= 2.0);
    }
}

TEST_CASE("white noise is predominantly unvoiced") {
    const AudioClip clip = fixtures::white_noise(0.173, 1.0, 48000, 99);  // about -20 dBFS
    const PitchTrack track = track_pitch(clip);
    std::size_t unvoiced = 0;
    for (const auto& f : track.frames) unvoiced += f.voiced ? 0 : 1;
    CHECK(static_cast<double>(unvoiced) / track.frames.size() >= 0.90);
}

TEST_CASE("jittered tones remain trackable at the fundamental") {
    // alternating-sign perturbations make the signal exactly 2T-periodic;
    // the tracker must still report T, not the subharmonic
    for (double jitter : {0.0025, 0.005}) {
        const AudioClip clip = fixtures::tone(200.0, 1.0, 48000, jitter, 0.055);
        const PitchTrack track = track_pitch(clip);
        CHECK(std::abs(median_voiced_f0(track) - 200.0) <= 4.0);
    }
}

TEST_CASE("pitch errors") {
    AudioClip tiny;
    tiny.sample_rate_hz = 48000;
    tiny.samples.assign(100, 0.0);  // far below one 40 ms window
    CHECK_THROWS_AS(track_pitch(tiny), Error);

    DspParams bad;
    bad.pitch_floor_hz = 500;
    bad.pitch_ceil_hz = 60;
    const AudioClip clip = fixtures::tone(200.0, 0.5, 16000);
    CHECK_THROWS_AS(track_pitch(clip, bad), Error);
}

TEST_CASE("intensity of a full-scale sine reads 90.97 dB") {
    const AudioClip clip = fixtures::sine(125.0, 1.0, 1.0, 16000);
    const IntensityTrack track = track_intensity(clip);
    // interior frames only (skip the first/last few)
    for (std::size_t i = 5; i + 5 < track.frames.size(); ++i) {
        CHECK(track.frames[i].level_db == doctest::Approx(90.97).epsilon(0.002));
    }
}

TEST_CASE("intensity is log-linear in amplitude") {
    const AudioClip loud = fixtures::sine(125.0, 1.0, 0.5, 16000);
    const AudioClip quiet = fixtures::sine(125.0, 0.1, 0.5, 16000);
    const IntensityTrack tl = track_intensity(loud);
    const IntensityTrack tq = track_intensity(quiet);
    REQUIRE(tl.frames.size() == tq.frames.size());
    for (std::size_t i = 0; i < tl.frames.size(); ++i) {
        CHECK(tl.frames[i].level_db - tq.frames[i].level_db ==
              doctest::Approx(20.0).epsilon(1e-9));
    }
}

TEST_CASE("digital zero clamps to 0 dB") {
    AudioClip clip;
    clip.sample_rate_hz = 16000;
    clip.samples.assign(16000, 0.0);
    const IntensityTrack track = track_intensity(clip);
    for (const auto& f : track.frames) CHECK(f.level_db == 0.0);
}

TEST_CASE("gain scaling shifts every unclamped frame by exactly 20 log10 g") {
    const AudioClip base = fixtures::tone(150.0, 0.8, 16000, 0.003, 0.02, 0.2, 70.0);
    AudioClip scaled = base;
    const double g = 0.25;
    for (auto& s : scaled.samples) s *= g;
    const IntensityTrack tb = track_intensity(base);
    const IntensityTrack ts = track_intensity(scaled);
    REQUIRE(tb.frames.size() == ts.frames.size());
    const double shift = 20.0 * std::log10(g);
    for (std::size_t i = 0; i < tb.frames.size(); ++i) {
        if (tb.frames[i].level_db <= 0.0 || ts.frames[i].level_db <= 0.0) continue;
        CHECK(ts.frames[i].level_db - tb.frames[i].level_db ==
              doctest::Approx(shift).epsilon(1e-9));
    }
}

TEST_CASE("speech onset after half a second of silence") {
    const AudioClip clip = fixtures::tone(200.0, 1.0, 48000, 0.0, 0.0, 0.5);
    const Segmentation seg = detect_activity(clip, track_intensity(clip));
    CHECK(seg.speech_onset_s == doctest::Approx(0.50).epsilon(0.04));
    CHECK(std::abs(seg.speech_onset_s - 0.50) <= 0.02);
    CHECK(std::abs(seg.speech_end_s - 1.50) <= 0.03);
}

TEST_CASE("immediate speech detects onset within one hop") {
    const AudioClip clip = fixtures::tone(200.0, 1.0, 48000);
    const Segmentation seg = detect_activity(clip, track_intensity(clip));
    CHECK(seg.speech_onset_s <= 0.01);
}

TEST_CASE("all-zero clip raises NoSpeechDetected") {
    AudioClip clip;
    clip.sample_rate_hz = 16000;
    clip.samples.assign(16000, 0.0);
    try {
        detect_activity(clip, track_intensity(clip));
        FAIL("expected NoSpeechDetected");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoSpeechDetected);
    }
}

TEST_CASE("an internal pause of length L >= 120 ms reports one gap within 20 ms") {
    for (double len : {0.12, 0.16, 0.25}) {
        SynthSpec spec;
        spec.f0_hz = 200.0;
        spec.leading_silence_s = 0.5;
        spec.total_speech_s = 1.4;
        spec.intensity_db = 75.0;
        spec.internal_pauses.emplace_back(0.6, len);
        const AudioClip clip = synthesize_utterance(spec, 48000);
        const Segmentation seg = detect_activity(clip, track_intensity(clip));
        REQUIRE(seg.silent_gaps.size() == 1);
        CHECK(std::abs(seg.silent_gaps[0].second - len) <= 0.020);
        // gap lies strictly inside the speech span
        CHECK(seg.silent_gaps[0].first > seg.speech_onset_s);
        CHECK(seg.silent_gaps[0].first + seg.silent_gaps[0].second < seg.speech_end_s);
    }
}

TEST_CASE("silent gaps are disjoint and ordered") {
    SynthSpec spec;
    spec.f0_hz = 150.0;
    spec.leading_silence_s = 0.3;
    spec.total_speech_s = 2.0;
    spec.intensity_db = 72.0;
    spec.internal_pauses.emplace_back(0.4, 0.15);
    spec.internal_pauses.emplace_back(1.0, 0.2);
    spec.internal_pauses.emplace_back(1.6, 0.1);
    const AudioClip clip = synthesize_utterance(spec, 16000);
    const Segmentation seg = detect_activity(clip, track_intensity(clip));
    REQUIRE(seg.silent_gaps.size() >= 2);
    for (std::size_t i = 1; i < seg.silent_gaps.size(); ++i) {
        CHECK(seg.silent_gaps[i - 1].first + seg.silent_gaps[i - 1].second <
              seg.silent_gaps[i].first);
    }
}

TEST_CASE("pitch scale equivariance: halving f0 halves the median") {
    const AudioClip hi = fixtures::tone(240.0, 1.0, 48000);
    const AudioClip lo = fixtures::tone(120.0, 1.0, 48000);
    const double m_hi = median_voiced_f0(track_pitch(hi));
    const double m_lo = median_voiced_f0(track_pitch(lo));
    CHECK(m_lo == doctest::Approx(m_hi / 2.0).epsilon(0.02));
}

TEST_CASE("period extraction on a strictly periodic train") {
    const AudioClip clip = fixtures::tone(200.0, 1.0, 48000);
    const PitchTrack pitch = track_pitch(clip);
    const PeriodSequence seq = extract_periods(clip, pitch);
    REQUIRE(seq.periods_s.size() > 100);
    for (double p : seq.periods_s) {
        CHECK(std::abs(p - 0.005) <= 1.0 / 48000.0);
    }
    // identical cycles: amplitudes all equal within interpolation noise
    const double a0 = seq.peak_amplitudes.front();
    for (double a : seq.peak_amplitudes) CHECK(a == doctest::Approx(a0).epsilon(1e-3));
}

TEST_CASE("period extraction recovers alternating period perturbation") {
    const AudioClip clip = fixtures::tone(200.0, 1.0, 48000, 0.005, 0.0);
    const PeriodSequence seq = extract_periods(clip, track_pitch(clip));
    REQUIRE(seq.periods_s.size() > 50);
    const double t_long = 0.005 * 1.005;
    const double t_short = 0.005 * 0.995;
    const double one_sample = 1.0 / 48000.0;
    std::size_t ok = 0;
    for (double p : seq.periods_s) {
        if (std::abs(p - t_long) <= one_sample || std::abs(p - t_short) <= one_sample) ++ok;
    }
    CHECK(ok == seq.periods_s.size());
}

TEST_CASE("period extraction recovers alternating amplitude perturbation") {
    const AudioClip clip = fixtures::tone(200.0, 1.0, 48000, 0.0, 0.05);
    const PeriodSequence seq = extract_periods(clip, track_pitch(clip));
    REQUIRE(seq.peak_amplitudes.size() > 50);
    // consecutive amplitudes alternate high/low with ratio (1.05 / 0.95)
    std::size_t alternations = 0;
    for (std::size_t i = 1; i < seq.peak_amplitudes.size(); ++i) {
        const double ratio = seq.peak_amplitudes[i] / seq.peak_amplitudes[i - 1];
        const double expected = 1.05 / 0.95;
        if (std::abs(ratio - expected) / expected < 0.01 ||
            std::abs(ratio - 1.0 / expected) * expected < 0.01) {
            ++alternations;
        }
    }
    CHECK(alternations >= seq.peak_amplitudes.size() - 2);
}

TEST_CASE("periods/amplitudes stay the same length; counts match maxima minus intervals") {
    SynthSpec spec;
    spec.f0_hz = 180.0;
    spec.leading_silence_s = 0.2;
    spec.total_speech_s = 1.2;
    spec.intensity_db = 74.0;
    spec.internal_pauses.emplace_back(0.5, 0.2);  // splits the train into two voiced runs
    const AudioClip clip = synthesize_utterance(spec, 48000);
    const PeriodSequence seq = extract_periods(clip, track_pitch(clip));
    CHECK(seq.periods_s.size() == seq.peak_amplitudes.size());
    CHECK(seq.interval_starts.size() >= 2);
}

TEST_CASE("extract_periods without voiced frames raises NoVoicedRegion") {
    const AudioClip noise = fixtures::white_noise(0.1, 0.6, 16000, 5);
    const PitchTrack pitch = track_pitch(noise);
    try {
        extract_periods(noise, pitch);
        FAIL("expected NoVoicedRegion");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoVoicedRegion);
    }
}

TEST_CASE("voiced intervals attach inside the speech span") {
    const AudioClip clip = fixtures::tone(200.0, 1.0, 48000, 0.0, 0.0, 0.4);
    const IntensityTrack intensity = track_intensity(clip);
    Segmentation seg = detect_activity(clip, intensity);
    const PitchTrack pitch = track_pitch(clip);
    attach_voiced_intervals(seg, pitch, clip.duration_s());
    REQUIRE(!seg.voiced_intervals.empty());
    for (const auto& [start, end] : seg.voiced_intervals) {
        CHECK(start >= seg.speech_onset_s - 1e-9);
        CHECK(end <= seg.speech_end_s + 1e-9);
        CHECK(start < end);
    }
}
