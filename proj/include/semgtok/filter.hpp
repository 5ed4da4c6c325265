// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "semgtok/config.hpp"
#include "semgtok/recording.hpp"

namespace semgtok {

// Digital IIR transfer function, b over a, a[0] == 1.
struct TransferFunction {
    std::vector<double> b;
    std::vector<double> a;
};

// Butterworth bandpass of prototype order `order` (2*order poles) designed
// by bilinear transform with frequency pre-warping.
TransferFunction design_butterworth_bandpass(int order,
                                             double low_hz,
                                             double high_hz,
                                             double sample_rate_hz);

// Zero-phase bandpass. The signal is odd-reflection padded by 3*(2*order)
// samples at each end, then run through the filter once in each direction;
// the two pass orders (forward-backward and backward-forward) are averaged,
// which makes the operator exactly symmetric under time reversal. Net
// magnitude response is the squared Butterworth response, phase is zero.
std::vector<double> bandpass_filter_channel(const std::vector<double>& x,
                                            const PipelineConfig& cfg,
                                            double sample_rate_hz);

Recording bandpass_filter(const Recording& rec, const PipelineConfig& cfg);

// Single causal pass, direct form II transposed, zero initial state.
std::vector<double> iir_filter(const TransferFunction& tf,
                               const std::vector<double>& x);

} // namespace semgtok
