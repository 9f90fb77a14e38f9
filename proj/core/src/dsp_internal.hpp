#pragma once

#include <vector>

#include "vox/dsp.hpp"

namespace vox {

// Shared between the VAD and the pitch tracker's energy gate.  Levels and
// times describe one frame track; returns the speech/silence threshold in dB.
double speech_threshold_db(const std::vector<double>& levels, const std::vector<double>& times,
                           double window_s, const DspParams& params);

}  // namespace vox
