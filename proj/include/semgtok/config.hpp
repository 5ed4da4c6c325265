// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>

namespace semgtok {

// Settings shared by the whole pipeline: filtering, segmentation, feature
// extraction and codebook training. A codebook stores the config it was
// trained with, and inference verifies the feature-affecting fields match.
struct PipelineConfig {
    double band_low_hz = 20.0;
    double band_high_hz = 450.0;
    int filter_order = 4;

    double window_ms = 50.0;
    double stride_ms = 25.0;

    double zc_threshold = 0.0;
    double ssc_threshold = 0.0;
    double wamp_threshold = 0.02; // mV

    int ar_order = 4;
    int fft_size = 128; // power of two
    double psr_halfband_hz = 10.0;

    int k_clusters = 13;
    int kmeans_restarts = 10;
    int kmeans_max_iter = 300;
    double kmeans_rel_tol = 1e-6;
    std::uint64_t rng_seed = 0;

    // Structural invariants that do not need a sample rate.
    void validate() const;
    // Band placement against a concrete Nyquist limit.
    void validate_band(double sample_rate_hz) const;

    // True when two configs produce identical feature vectors for the same
    // recording (clustering knobs excluded).
    bool feature_compatible_with(const PipelineConfig& other) const;
};

PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void save_pipeline_config(const PipelineConfig& cfg, const std::filesystem::path& path);

} // namespace semgtok
