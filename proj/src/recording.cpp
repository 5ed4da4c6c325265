// SPDX-License-Identifier: Apache-2.0
#include "semgtok/recording.hpp"

#include <cmath>
#include <unordered_set>

#include "semgtok/error.hpp"

namespace semgtok {

std::vector<double> Recording::channel(std::size_t c) const {
    std::vector<double> out(sample_count);
    for (std::size_t t = 0; t < sample_count; ++t) out[t] = at(t, c);
    return out;
}

Recording Recording::create(std::vector<double> samples,
                            std::size_t sample_count,
                            std::size_t channel_count,
                            double sample_rate_hz,
                            std::vector<std::string> channel_labels) {
    if (sample_count == 0 || channel_count == 0)
        raise(ErrorCode::EmptyRecording, "recording must have at least one sample and channel");
    if (samples.size() != sample_count * channel_count)
        raise(ErrorCode::MalformedRow, "sample buffer size does not match declared shape");
    if (!(sample_rate_hz > 0.0))
        raise(ErrorCode::InvalidConfig, "sample_rate_hz must be > 0");
    if (channel_labels.empty()) channel_labels = default_channel_labels(channel_count);
    if (channel_labels.size() != channel_count)
        raise(ErrorCode::MalformedRow, "channel label count does not match channel count");
    std::unordered_set<std::string> seen;
    for (const auto& label : channel_labels)
        if (!seen.insert(label).second)
            raise(ErrorCode::MalformedRow, "duplicate channel label: " + label);
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (!std::isfinite(samples[i]))
            raise(ErrorCode::NonFiniteSample,
                  "non-finite sample at row " + std::to_string(i / channel_count) +
                      ", column " + std::to_string(i % channel_count));
    Recording rec;
    rec.samples = std::move(samples);
    rec.sample_count = sample_count;
    rec.channel_count = channel_count;
    rec.sample_rate_hz = sample_rate_hz;
    rec.channel_labels = std::move(channel_labels);
    return rec;
}

std::vector<std::string> default_channel_labels(std::size_t channel_count) {
    std::vector<std::string> labels;
    labels.reserve(channel_count);
    for (std::size_t c = 0; c < channel_count; ++c)
        labels.push_back("ch" + std::to_string(c));
    return labels;
}

Recording select_channels(const Recording& rec, const std::vector<std::string>& labels) {
    if (labels.empty())
        raise(ErrorCode::ChannelMismatch, "channel subset is empty");
    std::vector<std::size_t> indices;
    indices.reserve(labels.size());
    for (const auto& label : labels) {
        bool found = false;
        for (std::size_t c = 0; c < rec.channel_count; ++c)
            if (rec.channel_labels[c] == label) {
                indices.push_back(c);
                found = true;
                break;
            }
        if (!found)
            raise(ErrorCode::ChannelMismatch, "unknown channel label: " + label);
    }
    std::vector<double> samples(rec.sample_count * indices.size());
    for (std::size_t t = 0; t < rec.sample_count; ++t)
        for (std::size_t i = 0; i < indices.size(); ++i)
            samples[t * indices.size() + i] = rec.at(t, indices[i]);
    return Recording::create(std::move(samples), rec.sample_count, indices.size(),
                             rec.sample_rate_hz, labels);
}

} // namespace semgtok
