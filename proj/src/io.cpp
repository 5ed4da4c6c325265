// SPDX-License-Identifier: Apache-2.0
#include "semgtok/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "semgtok/detail/text.hpp"
#include "semgtok/error.hpp"

namespace semgtok {

namespace {

Recording load_csv(const std::filesystem::path& path,
                   double sample_rate_hz,
                   std::vector<std::string> channel_labels) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::UnreadableFile, "cannot open: " + path.string());

    std::vector<double> samples;
    std::size_t columns = 0;
    std::size_t rows = 0;
    std::string line;
    bool first_line = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = detail::trim(line);
        if (text.empty()) continue;
        auto cells = detail::split(text, ',');
        if (first_line) {
            first_line = false;
            bool numeric = true;
            for (auto cell : cells)
                if (!detail::parse_double(cell)) { numeric = false; break; }
            if (!numeric) {
                // header row supplies the channel labels
                channel_labels.clear();
                for (auto cell : cells)
                    channel_labels.emplace_back(detail::trim(cell));
                columns = cells.size();
                continue;
            }
        }
        if (columns == 0) columns = cells.size();
        if (cells.size() != columns)
            raise(ErrorCode::MalformedRow,
                  path.string() + " line " + std::to_string(line_no) + ": expected " +
                      std::to_string(columns) + " columns, got " +
                      std::to_string(cells.size()));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            auto value = detail::parse_double(cells[c]);
            if (!value)
                raise(ErrorCode::MalformedRow,
                      path.string() + " line " + std::to_string(line_no) +
                          ": cell " + std::to_string(c) + " is not a number");
            if (!std::isfinite(*value))
                raise(ErrorCode::NonFiniteSample,
                      path.string() + ": non-finite value at row " +
                          std::to_string(rows) + ", column " + std::to_string(c));
            samples.push_back(*value);
        }
        ++rows;
    }
    if (rows == 0) raise(ErrorCode::EmptyRecording, path.string() + " has no data rows");
    return Recording::create(std::move(samples), rows, columns, sample_rate_hz,
                             std::move(channel_labels));
}

Recording load_raw_f32le(const std::filesystem::path& path,
                         double sample_rate_hz,
                         std::vector<std::string> channel_labels,
                         std::size_t channel_count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::UnreadableFile, "cannot open: " + path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    if (bytes.empty()) raise(ErrorCode::EmptyRecording, path.string() + " is empty");
    if (bytes.size() % 4 != 0)
        raise(ErrorCode::MalformedRow,
              path.string() + ": size is not a multiple of 4 bytes");
    const std::size_t total = bytes.size() / 4;

    std::size_t channels = channel_count;
    if (!channel_labels.empty()) channels = channel_labels.size();
    if (channels == 0) channels = 1;
    if (total % channels != 0)
        raise(ErrorCode::MalformedRow,
              path.string() + ": " + std::to_string(channels) +
                  " channels do not divide " + std::to_string(total) + " values");

    std::vector<double> samples(total);
    for (std::size_t i = 0; i < total; ++i) {
        std::uint32_t raw = 0;
        std::memcpy(&raw, bytes.data() + 4 * i, 4);
        if constexpr (std::endian::native == std::endian::big)
            raw = __builtin_bswap32(raw);
        float value;
        std::memcpy(&value, &raw, 4);
        if (!std::isfinite(value))
            raise(ErrorCode::NonFiniteSample,
                  path.string() + ": non-finite value at row " +
                      std::to_string(i / channels) + ", column " +
                      std::to_string(i % channels));
        samples[i] = static_cast<double>(value);
    }
    return Recording::create(std::move(samples), total / channels, channels,
                             sample_rate_hz, std::move(channel_labels));
}

} // namespace

RecordingFormat parse_recording_format(const std::string& name) {
    if (name == "csv") return RecordingFormat::Csv;
    if (name == "raw_f32le" || name == "raw") return RecordingFormat::RawF32le;
    raise(ErrorCode::InvalidConfig, "unknown recording format: " + name);
}

std::string recording_format_name(RecordingFormat format) {
    return format == RecordingFormat::Csv ? "csv" : "raw_f32le";
}

Recording load_recording(const std::filesystem::path& path,
                         RecordingFormat format,
                         double sample_rate_hz,
                         std::vector<std::string> channel_labels,
                         std::size_t channel_count) {
    if (!(sample_rate_hz > 0.0))
        raise(ErrorCode::InvalidConfig, "sample_rate_hz must be > 0");
    switch (format) {
        case RecordingFormat::Csv:
            return load_csv(path, sample_rate_hz, std::move(channel_labels));
        case RecordingFormat::RawF32le:
            return load_raw_f32le(path, sample_rate_hz, std::move(channel_labels),
                                  channel_count);
    }
    raise(ErrorCode::InvalidConfig, "unhandled recording format");
}

void save_recording(const Recording& rec,
                    const std::filesystem::path& path,
                    RecordingFormat format) {
    if (format == RecordingFormat::Csv) {
        std::ofstream out(path);
        if (!out) raise(ErrorCode::IoError, "cannot write: " + path.string());
        for (std::size_t c = 0; c < rec.channel_count; ++c)
            out << (c ? "," : "") << rec.channel_labels[c];
        out << '\n';
        for (std::size_t t = 0; t < rec.sample_count; ++t) {
            for (std::size_t c = 0; c < rec.channel_count; ++c)
                out << (c ? "," : "") << detail::format_double_sig9(rec.at(t, c));
            out << '\n';
        }
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoError, "cannot write: " + path.string());
    for (std::size_t i = 0; i < rec.samples.size(); ++i) {
        const float value = static_cast<float>(rec.samples[i]);
        std::uint32_t raw = 0;
        std::memcpy(&raw, &value, 4);
        if constexpr (std::endian::native == std::endian::big)
            raw = __builtin_bswap32(raw);
        char bytes[4];
        std::memcpy(bytes, &raw, 4);
        out.write(bytes, 4);
    }
}

} // namespace semgtok
