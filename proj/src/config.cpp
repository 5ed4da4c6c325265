// SPDX-License-Identifier: Apache-2.0
#include "semgtok/config.hpp"

#include <fstream>
#include <string>

#include "semgtok/detail/fft.hpp"
#include "semgtok/detail/text.hpp"
#include "semgtok/error.hpp"

namespace semgtok {

void PipelineConfig::validate() const {
    if (!(band_low_hz > 0.0) || !(band_high_hz > band_low_hz))
        raise(ErrorCode::InvalidBand, "band edges must satisfy 0 < low < high");
    if (filter_order < 1)
        raise(ErrorCode::InvalidConfig, "filter_order must be >= 1");
    if (!(window_ms > 0.0) || !(stride_ms > 0.0))
        raise(ErrorCode::InvalidConfig, "window_ms and stride_ms must be > 0");
    if (stride_ms > window_ms)
        raise(ErrorCode::InvalidConfig, "stride_ms must not exceed window_ms");
    if (ar_order < 1)
        raise(ErrorCode::InvalidConfig, "ar_order must be >= 1");
    if (fft_size < 2 || !detail::is_power_of_two(static_cast<std::size_t>(fft_size)))
        raise(ErrorCode::InvalidConfig, "fft_size must be a power of two >= 2");
    if (!(psr_halfband_hz > 0.0))
        raise(ErrorCode::InvalidConfig, "psr_halfband_hz must be > 0");
    if (k_clusters < 2 || k_clusters > 26)
        raise(ErrorCode::InvalidConfig, "k_clusters must lie in [2, 26]");
    if (kmeans_restarts < 1 || kmeans_max_iter < 1)
        raise(ErrorCode::InvalidConfig, "kmeans_restarts and kmeans_max_iter must be >= 1");
    if (!(kmeans_rel_tol >= 0.0))
        raise(ErrorCode::InvalidConfig, "kmeans_rel_tol must be >= 0");
}

void PipelineConfig::validate_band(double sample_rate_hz) const {
    if (!(band_low_hz > 0.0 && band_low_hz < band_high_hz &&
          band_high_hz < sample_rate_hz / 2.0))
        raise(ErrorCode::InvalidBand,
              "band must satisfy 0 < low < high < sample_rate/2");
}

bool PipelineConfig::feature_compatible_with(const PipelineConfig& other) const {
    return band_low_hz == other.band_low_hz && band_high_hz == other.band_high_hz &&
           filter_order == other.filter_order && window_ms == other.window_ms &&
           stride_ms == other.stride_ms && zc_threshold == other.zc_threshold &&
           ssc_threshold == other.ssc_threshold &&
           wamp_threshold == other.wamp_threshold && ar_order == other.ar_order &&
           fft_size == other.fft_size && psr_halfband_hz == other.psr_halfband_hz;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::UnreadableFile, "cannot open config: " + path.string());
    PipelineConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = detail::trim(line);
        if (text.empty() || text.front() == '#') continue;
        auto eq = text.find('=');
        if (eq == std::string_view::npos)
            raise(ErrorCode::InvalidConfig,
                  "config line " + std::to_string(line_no) + " is not 'key = value'");
        auto key = detail::trim(text.substr(0, eq));
        auto value = detail::trim(text.substr(eq + 1));
        auto num = detail::parse_double(value);
        if (!num)
            raise(ErrorCode::InvalidConfig,
                  "config line " + std::to_string(line_no) + ": bad numeric value");
        if (key == "band_low_hz") cfg.band_low_hz = *num;
        else if (key == "band_high_hz") cfg.band_high_hz = *num;
        else if (key == "filter_order") cfg.filter_order = static_cast<int>(*num);
        else if (key == "window_ms") cfg.window_ms = *num;
        else if (key == "stride_ms") cfg.stride_ms = *num;
        else if (key == "zc_threshold") cfg.zc_threshold = *num;
        else if (key == "ssc_threshold") cfg.ssc_threshold = *num;
        else if (key == "wamp_threshold") cfg.wamp_threshold = *num;
        else if (key == "ar_order") cfg.ar_order = static_cast<int>(*num);
        else if (key == "fft_size") cfg.fft_size = static_cast<int>(*num);
        else if (key == "psr_halfband_hz") cfg.psr_halfband_hz = *num;
        else if (key == "k_clusters") cfg.k_clusters = static_cast<int>(*num);
        else if (key == "kmeans_restarts") cfg.kmeans_restarts = static_cast<int>(*num);
        else if (key == "kmeans_max_iter") cfg.kmeans_max_iter = static_cast<int>(*num);
        else if (key == "kmeans_rel_tol") cfg.kmeans_rel_tol = *num;
        else if (key == "rng_seed") cfg.rng_seed = static_cast<std::uint64_t>(*num);
        else
            raise(ErrorCode::InvalidConfig, "unknown config key: " + std::string(key));
    }
    cfg.validate();
    return cfg;
}

void save_pipeline_config(const PipelineConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write config: " + path.string());
    using detail::format_double;
    out << "band_low_hz = " << format_double(cfg.band_low_hz) << '\n'
        << "band_high_hz = " << format_double(cfg.band_high_hz) << '\n'
        << "filter_order = " << cfg.filter_order << '\n'
        << "window_ms = " << format_double(cfg.window_ms) << '\n'
        << "stride_ms = " << format_double(cfg.stride_ms) << '\n'
        << "zc_threshold = " << format_double(cfg.zc_threshold) << '\n'
        << "ssc_threshold = " << format_double(cfg.ssc_threshold) << '\n'
        << "wamp_threshold = " << format_double(cfg.wamp_threshold) << '\n'
        << "ar_order = " << cfg.ar_order << '\n'
        << "fft_size = " << cfg.fft_size << '\n'
        << "psr_halfband_hz = " << format_double(cfg.psr_halfband_hz) << '\n'
        << "k_clusters = " << cfg.k_clusters << '\n'
        << "kmeans_restarts = " << cfg.kmeans_restarts << '\n'
        << "kmeans_max_iter = " << cfg.kmeans_max_iter << '\n'
        << "kmeans_rel_tol = " << format_double(cfg.kmeans_rel_tol) << '\n'
        << "rng_seed = " << cfg.rng_seed << '\n';
}

} // namespace semgtok
