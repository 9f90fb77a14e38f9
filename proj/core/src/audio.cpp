#include "vox/audio.hpp"

#include <cmath>

#include "vox/errors.hpp"

namespace vox {

void validate_clip(const AudioClip& clip) {
    if (clip.sample_rate_hz <= 0) raise(ErrorCode::InvalidSpec, "sample rate must be positive");
    if (clip.samples.empty()) raise(ErrorCode::InvalidSpec, "clip has no samples");
    for (double x : clip.samples) {
        if (!std::isfinite(x) || x < -1.0 || x > 1.0) {
            raise(ErrorCode::InvalidSpec, "sample out of [-1, +1]");
        }
    }
}

}  // namespace vox
