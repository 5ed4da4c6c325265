// SPDX-License-Identifier: Apache-2.0
#include "semgtok/features.hpp"

#include <cmath>
#include <complex>
#include <fstream>

#include "semgtok/detail/fft.hpp"
#include "semgtok/detail/text.hpp"
#include "semgtok/error.hpp"
#include "semgtok/filter.hpp"

namespace semgtok {

const std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "rms", "zc", "ssc", "wl", "mav", "wamp", "arc", "mnf", "mdf", "psr",
};

TimeDomainFeatures time_domain_features(std::span<const double> x,
                                        const PipelineConfig& cfg) {
    const std::size_t w = x.size();
    if (w < 3) raise(ErrorCode::SegmentTooShort, "time-domain features need >= 3 samples");

    double sum_sq = 0.0, sum_abs = 0.0, wl = 0.0;
    double zc = 0.0, ssc = 0.0, wamp = 0.0;
    for (std::size_t t = 0; t < w; ++t) {
        sum_sq += x[t] * x[t];
        sum_abs += std::abs(x[t]);
    }
    for (std::size_t t = 0; t + 1 < w; ++t) {
        const double step = x[t + 1] - x[t];
        wl += std::abs(step);
        if (std::abs(step) > cfg.wamp_threshold) wamp += 1.0;
        if (x[t] * x[t + 1] < 0.0 && std::abs(x[t]) > cfg.zc_threshold &&
            std::abs(x[t + 1]) > cfg.zc_threshold)
            zc += 1.0;
    }
    for (std::size_t t = 1; t + 1 < w; ++t) {
        if ((x[t] - x[t - 1]) * (x[t] - x[t + 1]) > cfg.ssc_threshold) ssc += 1.0;
    }

    TimeDomainFeatures f;
    f.rms = std::sqrt(sum_sq / static_cast<double>(w));
    f.mav = sum_abs / static_cast<double>(w);
    f.wl = wl;
    f.zc = zc;
    f.ssc = ssc;
    f.wamp = wamp;
    return f;
}

ArCoefficient ar_coefficient(std::span<const double> x, int order) {
    const std::size_t w = x.size();
    if (order < 1) raise(ErrorCode::InvalidConfig, "AR order must be >= 1");
    if (w <= static_cast<std::size_t>(order))
        raise(ErrorCode::SegmentTooShort, "AR fit needs more samples than the order");

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(w);

    // biased autocorrelation of the mean-removed segment
    std::vector<double> r(static_cast<std::size_t>(order) + 1, 0.0);
    for (std::size_t lag = 0; lag <= static_cast<std::size_t>(order); ++lag) {
        double acc = 0.0;
        for (std::size_t t = 0; t + lag < w; ++t)
            acc += (x[t] - mean) * (x[t + lag] - mean);
        r[lag] = acc / static_cast<double>(w);
    }
    if (r[0] == 0.0) return {0.0, true};

    // Levinson-Durbin; coefficients in the prediction convention
    // x[t] ~ sum_i a_i x[t-i].
    std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0);
    double err = r[0];
    for (int m = 1; m <= order; ++m) {
        double acc = r[static_cast<std::size_t>(m)];
        for (int i = 1; i < m; ++i)
            acc -= a[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(m - i)];
        if (err == 0.0) return {0.0, true};
        const double k = acc / err;
        std::vector<double> prev(a);
        a[static_cast<std::size_t>(m)] = k;
        for (int i = 1; i < m; ++i)
            a[static_cast<std::size_t>(i)] =
                prev[static_cast<std::size_t>(i)] - k * prev[static_cast<std::size_t>(m - i)];
        err *= (1.0 - k * k);
    }
    return {a[1], false};
}

SpectralFeatures spectral_features(std::span<const double> x,
                                   const PipelineConfig& cfg,
                                   double sample_rate_hz) {
    const std::size_t w = x.size();
    if (w < 8) raise(ErrorCode::SegmentTooShort, "spectral features need >= 8 samples");
    const std::size_t nfft = static_cast<std::size_t>(cfg.fft_size);
    if (nfft < w)
        raise(ErrorCode::InvalidConfig, "fft_size smaller than the segment window");

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(w);

    std::vector<std::complex<double>> buf(nfft, 0.0);
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (std::size_t t = 0; t < w; ++t) {
        const double hann =
            0.5 * (1.0 - std::cos(two_pi * static_cast<double>(t) /
                                  static_cast<double>(w - 1)));
        buf[t] = (x[t] - mean) * hann;
    }
    detail::fft_radix2(buf);

    // one-sided periodogram over 0 < f <= Nyquist
    const std::size_t bins = nfft / 2;
    std::vector<double> power(bins), freq(bins);
    double total = 0.0;
    for (std::size_t j = 1; j <= bins; ++j) {
        const double mag = std::abs(buf[j]);
        power[j - 1] = mag * mag;
        freq[j - 1] = static_cast<double>(j) * sample_rate_hz / static_cast<double>(nfft);
        total += power[j - 1];
    }
    if (total == 0.0) return {0.0, 0.0, 0.0, true};

    SpectralFeatures f;
    double weighted = 0.0;
    for (std::size_t j = 0; j < bins; ++j) weighted += freq[j] * power[j];
    f.mnf = weighted / total;

    double cumulative = 0.0;
    const double half = total / 2.0;
    for (std::size_t j = 0; j < bins; ++j) {
        cumulative += power[j];
        if (cumulative >= half) { f.mdf = freq[j]; break; }
    }

    std::size_t peak = 0;
    for (std::size_t j = 1; j < bins; ++j)
        if (power[j] > power[peak]) peak = j;
    double band = 0.0;
    for (std::size_t j = 0; j < bins; ++j)
        if (std::abs(freq[j] - freq[peak]) <= cfg.psr_halfband_hz) band += power[j];
    f.psr = band / total;
    return f;
}

FeatureVector extract_feature_vector(const Segment& seg,
                                     const PipelineConfig& cfg,
                                     double sample_rate_hz) {
    const auto td = time_domain_features(seg.values, cfg);
    const auto ar = ar_coefficient(seg.values, cfg.ar_order);
    const auto sp = spectral_features(seg.values, cfg, sample_rate_hz);

    FeatureVector f;
    f.values[kRms] = td.rms;
    f.values[kZc] = td.zc;
    f.values[kSsc] = td.ssc;
    f.values[kWl] = td.wl;
    f.values[kMav] = td.mav;
    f.values[kWamp] = td.wamp;
    f.values[kArc] = ar.a1;
    f.values[kMnf] = sp.mnf;
    f.values[kMdf] = sp.mdf;
    f.values[kPsr] = sp.psr;
    f.degenerate = ar.degenerate || sp.degenerate;
    return f;
}

RecordingFeatures extract_recording_features(const Recording& rec,
                                             const PipelineConfig& cfg) {
    const Recording filtered = bandpass_filter(rec, cfg);
    RecordingFeatures out;
    for (std::size_t c = 0; c < rec.channel_count; ++c) {
        auto segments = segment_channel(filtered, c, cfg);
        if (c == 0) out.segments_per_channel = segments.size();
        for (auto& seg : segments) {
            out.features.push_back(extract_feature_vector(seg, cfg, rec.sample_rate_hz));
            out.segments.push_back(std::move(seg));
        }
    }
    return out;
}

Normalizer fit_normalizer(const std::vector<FeatureVector>& features) {
    if (features.size() < 2)
        raise(ErrorCode::InsufficientData, "normalizer fit needs at least 2 vectors");
    const double n = static_cast<double>(features.size());

    Normalizer nz;
    for (std::size_t d = 0; d < kFeatureCount; ++d) {
        double sum = 0.0;
        for (const auto& f : features) {
            if (!std::isfinite(f.values[d]))
                raise(ErrorCode::NonFiniteFeature, "non-finite feature value");
            sum += f.values[d];
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& f : features) {
            const double diff = f.values[d] - mean;
            ss += diff * diff;
        }
        const double var = ss / n; // population variance
        nz.mean[d] = mean;
        if (var > 0.0) {
            nz.stddev[d] = std::sqrt(var);
            nz.zero_variance[d] = false;
        } else {
            nz.stddev[d] = 1.0;
            nz.zero_variance[d] = true;
        }
    }
    return nz;
}

FeatureVector apply_normalizer(const Normalizer& nz, const FeatureVector& f) {
    FeatureVector out = f;
    for (std::size_t d = 0; d < kFeatureCount; ++d)
        out.values[d] = (f.values[d] - nz.mean[d]) / nz.stddev[d];
    return out;
}

void write_feature_matrix_csv(const std::filesystem::path& path,
                              const std::vector<Segment>& segments,
                              const std::vector<FeatureVector>& features) {
    if (segments.size() != features.size())
        raise(ErrorCode::LengthMismatch, "segments and features differ in count");
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write: " + path.string());
    out << "channel,start_sample";
    for (auto name : kFeatureNames) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < segments.size(); ++i) {
        out << segments[i].channel_index << ',' << segments[i].start_sample;
        for (std::size_t d = 0; d < kFeatureCount; ++d)
            out << ',' << detail::format_double(features[i].values[d]);
        out << '\n';
    }
}

} // namespace semgtok
