// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace semgtok {

// Multichannel sampled signal. Samples are stored row-major, one row per
// time sample, one column per channel (millivolts by convention).
// Treated as immutable once constructed; safe to share across workers.
struct Recording {
    std::vector<double> samples; // size = sample_count * channel_count
    std::size_t sample_count = 0;
    std::size_t channel_count = 0;
    double sample_rate_hz = 0.0;
    std::vector<std::string> channel_labels;

    double at(std::size_t t, std::size_t c) const {
        return samples[t * channel_count + c];
    }
    double& at(std::size_t t, std::size_t c) {
        return samples[t * channel_count + c];
    }

    std::vector<double> channel(std::size_t c) const;

    // Validates all invariants: nonempty, finite samples, positive rate,
    // distinct labels matching the channel count.
    static Recording create(std::vector<double> samples,
                            std::size_t sample_count,
                            std::size_t channel_count,
                            double sample_rate_hz,
                            std::vector<std::string> channel_labels);
};

std::vector<std::string> default_channel_labels(std::size_t channel_count);

// Restriction to a named channel subset, in the order given.
Recording select_channels(const Recording& rec, const std::vector<std::string>& labels);

} // namespace semgtok
