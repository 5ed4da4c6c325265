// SPDX-License-Identifier: Apache-2.0
#include "semgtok/filter.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "semgtok/error.hpp"

namespace semgtok {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Expands prod (x - r_i) into monomial coefficients, highest power first.
std::vector<std::complex<double>> poly_from_roots(
    const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> coeffs{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(coeffs.size() + 1);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            next[i] += coeffs[i];
            next[i + 1] -= coeffs[i] * r;
        }
        coeffs = std::move(next);
    }
    return coeffs;
}

std::vector<double> oddpad(const std::vector<double>& x, std::size_t pad) {
    std::vector<double> ext;
    ext.reserve(x.size() + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i)
        ext.push_back(2.0 * x.front() - x[pad - i]);
    ext.insert(ext.end(), x.begin(), x.end());
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < pad; ++i)
        ext.push_back(2.0 * x.back() - x[n - 2 - i]);
    return ext;
}

std::vector<double> reversed(std::vector<double> v) {
    std::reverse(v.begin(), v.end());
    return v;
}

} // namespace

TransferFunction design_butterworth_bandpass(int order,
                                             double low_hz,
                                             double high_hz,
                                             double sample_rate_hz) {
    if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < sample_rate_hz / 2.0))
        raise(ErrorCode::InvalidBand, "band must satisfy 0 < low < high < rate/2");
    if (order < 1) raise(ErrorCode::InvalidConfig, "filter order must be >= 1");

    // Analog Butterworth prototype poles on the unit left half circle.
    std::vector<std::complex<double>> poles;
    for (int i = 0; i < order; ++i) {
        const double theta = kPi * (2.0 * i + order + 1.0) / (2.0 * order);
        poles.emplace_back(std::cos(theta), std::sin(theta));
    }

    // Pre-warped band edges, lowpass-to-bandpass transform.
    const double fs2 = 2.0 * sample_rate_hz;
    const double w1 = fs2 * std::tan(kPi * low_hz / sample_rate_hz);
    const double w2 = fs2 * std::tan(kPi * high_hz / sample_rate_hz);
    const double bw = w2 - w1;
    const double w0sq = w1 * w2;

    std::vector<std::complex<double>> bp_poles;
    bp_poles.reserve(2 * poles.size());
    for (const auto& p : poles) {
        const auto scaled = p * (bw / 2.0);
        const auto root = std::sqrt(scaled * scaled - w0sq);
        bp_poles.push_back(scaled + root);
        bp_poles.push_back(scaled - root);
    }
    std::vector<std::complex<double>> bp_zeros(static_cast<std::size_t>(order),
                                               std::complex<double>(0.0, 0.0));
    double gain = std::pow(bw, order);

    // Bilinear transform; the lowpass zeros at infinity land at z = -1.
    std::vector<std::complex<double>> z_poles, z_zeros;
    std::complex<double> num(1.0, 0.0), den(1.0, 0.0);
    for (const auto& p : bp_poles) {
        z_poles.push_back((fs2 + p) / (fs2 - p));
        den *= (fs2 - p);
    }
    for (const auto& z : bp_zeros) {
        z_zeros.push_back((fs2 + z) / (fs2 - z));
        num *= (fs2 - z);
    }
    while (z_zeros.size() < z_poles.size()) z_zeros.emplace_back(-1.0, 0.0);
    gain *= (num / den).real();

    const auto b_cplx = poly_from_roots(z_zeros);
    const auto a_cplx = poly_from_roots(z_poles);
    TransferFunction tf;
    tf.b.reserve(b_cplx.size());
    tf.a.reserve(a_cplx.size());
    for (const auto& c : b_cplx) tf.b.push_back(gain * c.real());
    for (const auto& c : a_cplx) tf.a.push_back(c.real());
    return tf;
}

std::vector<double> iir_filter(const TransferFunction& tf, const std::vector<double>& x) {
    const std::size_t nb = tf.b.size();
    const std::size_t na = tf.a.size();
    const std::size_t order = std::max(nb, na) - 1;
    std::vector<double> state(order, 0.0);
    std::vector<double> y(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double xn = x[n];
        const double yn = tf.b[0] * xn + state[0];
        for (std::size_t i = 1; i <= order; ++i) {
            const double bi = i < nb ? tf.b[i] : 0.0;
            const double ai = i < na ? tf.a[i] : 0.0;
            const double next = i < order ? state[i] : 0.0;
            state[i - 1] = bi * xn + next - ai * yn;
        }
        y[n] = yn;
    }
    return y;
}

std::vector<double> bandpass_filter_channel(const std::vector<double>& x,
                                            const PipelineConfig& cfg,
                                            double sample_rate_hz) {
    cfg.validate_band(sample_rate_hz);
    const std::size_t pad = 3 * (2 * static_cast<std::size_t>(cfg.filter_order));
    if (x.size() <= pad)
        raise(ErrorCode::RecordingTooShort,
              "need more than " + std::to_string(pad) + " samples, got " +
                  std::to_string(x.size()));

    const auto tf = design_butterworth_bandpass(cfg.filter_order, cfg.band_low_hz,
                                                cfg.band_high_hz, sample_rate_hz);
    const auto ext = oddpad(x, pad);

    // Forward-backward and backward-forward passes averaged; this keeps the
    // operator exactly symmetric under time reversal on finite signals.
    const auto fb = reversed(iir_filter(tf, reversed(iir_filter(tf, ext))));
    const auto bf = iir_filter(tf, reversed(iir_filter(tf, reversed(ext))));

    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = 0.5 * (fb[pad + i] + bf[pad + i]);
    return y;
}

Recording bandpass_filter(const Recording& rec, const PipelineConfig& cfg) {
    Recording out = rec;
    for (std::size_t c = 0; c < rec.channel_count; ++c) {
        const auto filtered = bandpass_filter_channel(rec.channel(c), cfg, rec.sample_rate_hz);
        for (std::size_t t = 0; t < rec.sample_count; ++t)
            out.at(t, c) = filtered[t];
    }
    return out;
}

} // namespace semgtok
