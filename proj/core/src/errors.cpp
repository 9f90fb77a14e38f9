#include "vox/errors.hpp"

namespace vox {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::MalformedWav: return "MalformedWav";
        case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorCode::MalformedManifest: return "MalformedManifest";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ClipTooShort: return "ClipTooShort";
        case ErrorCode::NoSpeechDetected: return "NoSpeechDetected";
        case ErrorCode::NoVoicedRegion: return "NoVoicedRegion";
        case ErrorCode::TooFewRows: return "TooFewRows";
        case ErrorCode::DegenerateGenderGroup: return "DegenerateGenderGroup";
        case ErrorCode::UnknownGender: return "UnknownGender";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::SingularKernel: return "SingularKernel";
        case ErrorCode::UntrainedModel: return "UntrainedModel";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::TooFewGroups: return "TooFewGroups";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::MissingUtteranceLabels: return "MissingUtteranceLabels";
    }
    return "UnknownError";
}

bool Error::is_input_error() const noexcept {
    switch (code_) {
        case ErrorCode::FileNotFound:
        case ErrorCode::MalformedWav:
        case ErrorCode::UnsupportedFormat:
        case ErrorCode::MalformedManifest:
        case ErrorCode::DuplicateId:
        case ErrorCode::OutOfRange:
        case ErrorCode::InvalidSpec:
        case ErrorCode::IoError:
            return true;
        default:
            return false;
    }
}

}  // namespace vox
