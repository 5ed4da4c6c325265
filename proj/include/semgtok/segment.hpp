// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "semgtok/config.hpp"
#include "semgtok/recording.hpp"

namespace semgtok {

// One analysis window of a single channel.
struct Segment {
    std::vector<double> values;
    std::size_t channel_index = 0;
    std::size_t start_sample = 0;
};

// Window/stride lengths in samples: floor(rate * ms / 1000).
std::size_t window_samples(double sample_rate_hz, const PipelineConfig& cfg);
std::size_t stride_samples(double sample_rate_hz, const PipelineConfig& cfg);

// Count of windows that fit: floor((T - W) / stride) + 1 for T >= W.
std::size_t segment_count(std::size_t total_samples,
                          std::size_t window,
                          std::size_t stride);

// Overlapping windows starting at sample 0; a trailing remainder shorter
// than the window is dropped.
std::vector<Segment> segment_channel(const Recording& rec,
                                     std::size_t channel_index,
                                     const PipelineConfig& cfg);

} // namespace semgtok
