// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semgtok {

// Stable error identifiers. Everything here is a data/validation failure;
// usage and internal errors are classified at the CLI boundary.
enum class ErrorCode {
    UnreadableFile,
    MalformedRow,
    NonFiniteSample,
    EmptyRecording,
    InvalidBand,
    RecordingTooShort,
    RecordingShorterThanWindow,
    SegmentTooShort,
    InsufficientData,
    TooFewSamples,
    NonFiniteFeature,
    ConfigMismatch,
    VersionMismatch,
    CorruptCodebook,
    LengthMismatch,
    EmptySequence,
    LabelOutOfRange,
    ChannelMismatch,
    CodebookMismatch,
    MissingReference,
    InvalidProfile,
    InvalidConfig,
    IoError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace semgtok
