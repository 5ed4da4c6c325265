// SPDX-License-Identifier: Apache-2.0
#include "semgtok/segment.hpp"

#include <cmath>

#include "semgtok/error.hpp"

namespace semgtok {

std::size_t window_samples(double sample_rate_hz, const PipelineConfig& cfg) {
    return static_cast<std::size_t>(std::floor(sample_rate_hz * cfg.window_ms / 1000.0));
}

std::size_t stride_samples(double sample_rate_hz, const PipelineConfig& cfg) {
    return static_cast<std::size_t>(std::floor(sample_rate_hz * cfg.stride_ms / 1000.0));
}

std::size_t segment_count(std::size_t total_samples, std::size_t window, std::size_t stride) {
    if (total_samples < window) return 0;
    return (total_samples - window) / stride + 1;
}

std::vector<Segment> segment_channel(const Recording& rec,
                                     std::size_t channel_index,
                                     const PipelineConfig& cfg) {
    if (channel_index >= rec.channel_count)
        raise(ErrorCode::ChannelMismatch,
              "channel " + std::to_string(channel_index) + " out of range");
    const std::size_t w = window_samples(rec.sample_rate_hz, cfg);
    const std::size_t stride = stride_samples(rec.sample_rate_hz, cfg);
    if (w == 0 || stride == 0)
        raise(ErrorCode::InvalidConfig, "window/stride shorter than one sample");
    if (rec.sample_count < w)
        raise(ErrorCode::RecordingShorterThanWindow,
              "recording has " + std::to_string(rec.sample_count) +
                  " samples, window needs " + std::to_string(w));

    const std::size_t count = segment_count(rec.sample_count, w, stride);
    std::vector<Segment> segments;
    segments.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Segment seg;
        seg.channel_index = channel_index;
        seg.start_sample = i * stride;
        seg.values.resize(w);
        for (std::size_t t = 0; t < w; ++t)
            seg.values[t] = rec.at(seg.start_sample + t, channel_index);
        segments.push_back(std::move(seg));
    }
    return segments;
}

} // namespace semgtok
