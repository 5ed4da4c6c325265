// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "semgtok/recording.hpp"

namespace semgtok {

// Synthetic sEMG generator: amplitude-modulated bandlimited Gaussian noise
// with a known per-sample activation track, for oracle-based testing.

struct ActivationStep {
    double level = 0.0;      // in [0, 1]
    double duration_ms = 0.0; // > 0
};

struct ChannelProfile {
    std::string label;
    std::vector<ActivationStep> steps; // last level holds beyond the end
};

struct ActivationProfile {
    std::vector<ChannelProfile> channels;
    double noise_floor_mv = 0.02;
    double gain_mv = 1.0; // amplitude added at level 1.0
    double band_low_hz = 20.0;
    double band_high_hz = 450.0;
    std::uint64_t seed = 0;
    // Optional defaults for generate(); CLI flags override.
    double sample_rate_hz = 0.0;
    double duration_ms = 0.0;
};

struct SynthResult {
    Recording recording;
    // level_tracks[c][t] = activation level used for channel c at sample t.
    std::vector<std::vector<double>> level_tracks;
};

// Each channel is unit-RMS bandlimited noise (independent per-channel seed)
// scaled per sample by noise_floor_mv + level * gain_mv.
SynthResult generate(const ActivationProfile& profile,
                     double sample_rate_hz,
                     double duration_ms);

// Key-value profile file, one `key = value` per line, channels declared as
//   channel = <label> : level@duration_ms, level@duration_ms, ...
ActivationProfile load_profile(const std::filesystem::path& path);

void write_level_tracks_csv(const SynthResult& result,
                            const std::filesystem::path& path);

} // namespace semgtok
