// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "semgtok/recording.hpp"

namespace semgtok {

enum class RecordingFormat {
    Csv,      // one row per time sample, one column per channel, optional header
    RawF32le, // channel-interleaved little-endian 32-bit floats
};

RecordingFormat parse_recording_format(const std::string& name);
std::string recording_format_name(RecordingFormat format);

// Loads a recording. For CSV, a header row (any non-numeric cell in the
// first row) supplies the channel labels. For raw_f32le the channel count
// comes from `channel_labels` when given, else `channel_count`, else 1;
// the declared channel count must divide the value count.
Recording load_recording(const std::filesystem::path& path,
                         RecordingFormat format,
                         double sample_rate_hz,
                         std::vector<std::string> channel_labels = {},
                         std::size_t channel_count = 0);

// CSV values are written with 9 significant digits; raw_f32le round-trips
// float32 payloads bit-exactly.
void save_recording(const Recording& rec,
                    const std::filesystem::path& path,
                    RecordingFormat format);

} // namespace semgtok
