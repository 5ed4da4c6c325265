// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "semgtok/config.hpp"
#include "semgtok/segment.hpp"

namespace semgtok {

// Fixed public feature order. Index k always names the same feature.
enum FeatureIndex : std::size_t {
    kRms = 0,
    kZc = 1,
    kSsc = 2,
    kWl = 3,
    kMav = 4,
    kWamp = 5,
    kArc = 6,
    kMnf = 7,
    kMdf = 8,
    kPsr = 9,
};

inline constexpr std::size_t kFeatureCount = 10;

extern const std::array<std::string_view, kFeatureCount> kFeatureNames;

// Ten-dimensional descriptor of one segment. `degenerate` marks vectors
// from zero-power or zero-variance segments; they still receive tokens.
struct FeatureVector {
    std::array<double, kFeatureCount> values{};
    bool degenerate = false;

    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
};

struct TimeDomainFeatures {
    double rms = 0, zc = 0, ssc = 0, wl = 0, mav = 0, wamp = 0;
};

struct ArCoefficient {
    double a1 = 0;
    bool degenerate = false; // zero-variance segment
};

struct SpectralFeatures {
    double mnf = 0, mdf = 0, psr = 0;
    bool degenerate = false; // zero power after mean removal
};

// RMS, MAV, WL plus the thresholded event counts ZC, SSC, WAMP.
TimeDomainFeatures time_domain_features(std::span<const double> x,
                                        const PipelineConfig& cfg);

// First coefficient of an AR(order) model fitted by Yule-Walker
// (Levinson-Durbin on the biased autocorrelation of the mean-removed
// segment). Prediction convention: x[t] ~ sum_i a_i x[t-i].
ArCoefficient ar_coefficient(std::span<const double> x, int order);

// Hann-windowed periodogram of the mean-removed segment, zero-padded to
// cfg.fft_size, over bins 0 < f <= Nyquist. MNF is the power-weighted mean
// frequency, MDF the first bin where cumulative power reaches half the
// total, PSR the power within +-psr_halfband_hz of the peak bin over total.
SpectralFeatures spectral_features(std::span<const double> x,
                                   const PipelineConfig& cfg,
                                   double sample_rate_hz);

FeatureVector extract_feature_vector(const Segment& seg,
                                     const PipelineConfig& cfg,
                                     double sample_rate_hz);

// Whole-recording front end: bandpass filter, segment every channel, then
// featurize, channel-major. Segments come back alongside for bookkeeping.
struct RecordingFeatures {
    std::vector<Segment> segments;
    std::vector<FeatureVector> features;
    std::size_t segments_per_channel = 0;
};

RecordingFeatures extract_recording_features(const Recording& rec,
                                             const PipelineConfig& cfg);

// Per-dimension z-score statistics, fitted on training data only and frozen
// inside the codebook. Zero-variance dimensions get deviation 1 and a flag.
struct Normalizer {
    std::array<double, kFeatureCount> mean{};
    std::array<double, kFeatureCount> stddev{};
    std::array<bool, kFeatureCount> zero_variance{};
};

Normalizer fit_normalizer(const std::vector<FeatureVector>& features);
FeatureVector apply_normalizer(const Normalizer& nz, const FeatureVector& f);

// Feature matrix export: channel, start_sample, then the ten features.
void write_feature_matrix_csv(const std::filesystem::path& path,
                              const std::vector<Segment>& segments,
                              const std::vector<FeatureVector>& features);

} // namespace semgtok
