// SPDX-License-Identifier: Apache-2.0
#include "semgtok/error.hpp"

namespace semgtok {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnreadableFile: return "UnreadableFile";
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::NonFiniteSample: return "NonFiniteSample";
        case ErrorCode::EmptyRecording: return "EmptyRecording";
        case ErrorCode::InvalidBand: return "InvalidBand";
        case ErrorCode::RecordingTooShort: return "RecordingTooShort";
        case ErrorCode::RecordingShorterThanWindow: return "RecordingShorterThanWindow";
        case ErrorCode::SegmentTooShort: return "SegmentTooShort";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
        case ErrorCode::ConfigMismatch: return "ConfigMismatch";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::CorruptCodebook: return "CorruptCodebook";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptySequence: return "EmptySequence";
        case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
        case ErrorCode::ChannelMismatch: return "ChannelMismatch";
        case ErrorCode::CodebookMismatch: return "CodebookMismatch";
        case ErrorCode::MissingReference: return "MissingReference";
        case ErrorCode::InvalidProfile: return "InvalidProfile";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace semgtok
