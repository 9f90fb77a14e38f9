#pragma once

#include <string>

#include "vox/audio.hpp"

namespace vox {

// Header fields needed to sanity-check a corpus without decoding samples.
struct WavInfo {
    int sample_rate_hz = 0;
    int channels = 0;
    int bits_per_sample = 0;
    std::size_t frame_count = 0;
};

// Reads the RIFF/fmt chunks only (cheap; used for manifest validation).
WavInfo read_wav_info(const std::string& path);

// Loads a 16-bit linear PCM mono WAV.  Samples are scaled by 1/32768.
// Errors: FileNotFound, MalformedWav (bad or truncated container),
// UnsupportedFormat (channels != 1, bits != 16, non-PCM codec).
AudioClip load_wav(const std::string& path);

// Writes a clip as 16-bit PCM mono, rounding to nearest and clamping to
// the int16 range.  load_wav(write_wav(x)) round-trips within 1/32768.
void write_wav(const std::string& path, const AudioClip& clip);

}  // namespace vox
