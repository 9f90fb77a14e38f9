#pragma once

#include <cstddef>
#include <vector>

namespace vox {

// Mono sample buffer.  Samples are real amplitudes in [-1, +1].
struct AudioClip {
    std::vector<double> samples;
    int sample_rate_hz = 0;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
    std::size_t size() const { return samples.size(); }
};

// Throws InvalidSpec when the buffer violates the clip invariants
// (empty, non-positive rate, non-finite or out-of-range samples).
void validate_clip(const AudioClip& clip);

}  // namespace vox
