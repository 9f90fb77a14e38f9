#pragma once

#include <stdexcept>
#include <string>

namespace vox {

// Every failure mode the library reports, grouped roughly by layer.
enum class ErrorCode {
    // io / corpus
    FileNotFound,
    MalformedWav,
    UnsupportedFormat,
    MalformedManifest,
    DuplicateId,
    OutOfRange,
    InvalidSpec,
    IoError,
    // dsp
    ClipTooShort,
    NoSpeechDetected,
    NoVoicedRegion,
    // features
    TooFewRows,
    DegenerateGenderGroup,
    UnknownGender,
    // stats
    DegenerateInput,
    TooFewSamples,
    ZeroVariance,
    LengthMismatch,
    // learn
    EmptyTrainingSet,
    NonConvergence,
    SingularKernel,
    UntrainedModel,
    InvalidArgument,
    // eval
    TooFewGroups,
    SingleClass,
    MissingUtteranceLabels,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    // True for input/IO failures (CLI exit 1), false for analysis-degenerate ones (exit 2).
    bool is_input_error() const noexcept;

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace vox
