// SPDX-License-Identifier: Apache-2.0
#include "semgtok/synth.hpp"

#include <cmath>
#include <fstream>

#include "semgtok/detail/rng.hpp"
#include "semgtok/detail/text.hpp"
#include "semgtok/error.hpp"
#include "semgtok/filter.hpp"

namespace semgtok {

namespace {

void validate_profile(const ActivationProfile& profile, double sample_rate_hz) {
    if (profile.channels.empty())
        raise(ErrorCode::InvalidProfile, "profile declares no channels");
    if (!(profile.noise_floor_mv > 0.0))
        raise(ErrorCode::InvalidProfile, "noise_floor_mv must be > 0");
    if (!(profile.gain_mv >= 0.0))
        raise(ErrorCode::InvalidProfile, "gain_mv must be >= 0");
    if (!(profile.band_low_hz > 0.0 && profile.band_low_hz < profile.band_high_hz &&
          profile.band_high_hz < sample_rate_hz / 2.0))
        raise(ErrorCode::InvalidProfile, "carrier band must lie inside (0, Nyquist)");
    for (const auto& ch : profile.channels)
        for (const auto& step : ch.steps) {
            if (!(step.level >= 0.0 && step.level <= 1.0))
                raise(ErrorCode::InvalidProfile, "levels must lie in [0, 1]");
            if (!(step.duration_ms > 0.0))
                raise(ErrorCode::InvalidProfile, "step durations must be > 0");
        }
}

std::vector<double> level_track(const ChannelProfile& ch,
                                std::size_t samples,
                                double sample_rate_hz) {
    std::vector<double> track(samples, 0.0);
    if (ch.steps.empty()) return track;
    std::size_t t = 0;
    for (const auto& step : ch.steps) {
        const auto span = static_cast<std::size_t>(
            std::floor(sample_rate_hz * step.duration_ms / 1000.0));
        for (std::size_t i = 0; i < span && t < samples; ++i, ++t)
            track[t] = step.level;
        if (t >= samples) break;
    }
    for (; t < samples; ++t) track[t] = ch.steps.back().level; // hold last level
    return track;
}

} // namespace

SynthResult generate(const ActivationProfile& profile,
                     double sample_rate_hz,
                     double duration_ms) {
    if (!(sample_rate_hz > 0.0) || !(duration_ms > 0.0))
        raise(ErrorCode::InvalidProfile, "sample rate and duration must be > 0");
    validate_profile(profile, sample_rate_hz);
    const auto samples = static_cast<std::size_t>(
        std::floor(sample_rate_hz * duration_ms / 1000.0));
    if (samples == 0) raise(ErrorCode::InvalidProfile, "duration shorter than one sample");

    PipelineConfig carrier_cfg;
    carrier_cfg.band_low_hz = profile.band_low_hz;
    carrier_cfg.band_high_hz = profile.band_high_hz;

    SynthResult result;
    std::vector<double> interleaved(samples * profile.channels.size());
    std::vector<std::string> labels;
    result.level_tracks.reserve(profile.channels.size());

    for (std::size_t c = 0; c < profile.channels.size(); ++c) {
        const auto& ch = profile.channels[c];
        labels.push_back(ch.label.empty() ? "ch" + std::to_string(c) : ch.label);

        detail::Rng rng(detail::mix_seed(profile.seed, c));
        std::vector<double> noise(samples);
        for (auto& v : noise) v = rng.normal();
        noise = bandpass_filter_channel(noise, carrier_cfg, sample_rate_hz);

        double rms = 0.0;
        for (double v : noise) rms += v * v;
        rms = std::sqrt(rms / static_cast<double>(samples));
        const double inv_rms = rms > 0.0 ? 1.0 / rms : 0.0;

        auto track = level_track(ch, samples, sample_rate_hz);
        for (std::size_t t = 0; t < samples; ++t) {
            const double amplitude = profile.noise_floor_mv + track[t] * profile.gain_mv;
            interleaved[t * profile.channels.size() + c] = noise[t] * inv_rms * amplitude;
        }
        result.level_tracks.push_back(std::move(track));
    }

    result.recording = Recording::create(std::move(interleaved), samples,
                                         profile.channels.size(), sample_rate_hz,
                                         std::move(labels));
    return result;
}

ActivationProfile load_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::UnreadableFile, "cannot open profile: " + path.string());

    ActivationProfile profile;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = detail::trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos)
            raise(ErrorCode::InvalidProfile,
                  "profile line " + std::to_string(line_no) + " is not 'key = value'");
        const auto key = detail::trim(text.substr(0, eq));
        const auto value = detail::trim(text.substr(eq + 1));

        if (key == "channel") {
            // <label> : level@duration_ms, level@duration_ms, ...
            const auto colon = value.find(':');
            if (colon == std::string_view::npos)
                raise(ErrorCode::InvalidProfile,
                      "profile line " + std::to_string(line_no) +
                          ": channel needs '<label> : steps'");
            ChannelProfile ch;
            ch.label = std::string(detail::trim(value.substr(0, colon)));
            for (auto step_text : detail::split(value.substr(colon + 1), ',')) {
                step_text = detail::trim(step_text);
                if (step_text.empty()) continue;
                const auto at = step_text.find('@');
                if (at == std::string_view::npos)
                    raise(ErrorCode::InvalidProfile,
                          "profile line " + std::to_string(line_no) +
                              ": step needs 'level@duration_ms'");
                const auto level = detail::parse_double(step_text.substr(0, at));
                const auto duration = detail::parse_double(step_text.substr(at + 1));
                if (!level || !duration)
                    raise(ErrorCode::InvalidProfile,
                          "profile line " + std::to_string(line_no) + ": bad step numbers");
                ch.steps.push_back({*level, *duration});
            }
            if (ch.steps.empty())
                raise(ErrorCode::InvalidProfile,
                      "profile line " + std::to_string(line_no) + ": channel has no steps");
            profile.channels.push_back(std::move(ch));
            continue;
        }

        const auto num = detail::parse_double(value);
        if (!num)
            raise(ErrorCode::InvalidProfile,
                  "profile line " + std::to_string(line_no) + ": bad numeric value");
        if (key == "noise_floor_mv") profile.noise_floor_mv = *num;
        else if (key == "gain_mv") profile.gain_mv = *num;
        else if (key == "band_low_hz") profile.band_low_hz = *num;
        else if (key == "band_high_hz") profile.band_high_hz = *num;
        else if (key == "seed") profile.seed = static_cast<std::uint64_t>(*num);
        else if (key == "sample_rate_hz") profile.sample_rate_hz = *num;
        else if (key == "duration_ms") profile.duration_ms = *num;
        else
            raise(ErrorCode::InvalidProfile, "unknown profile key: " + std::string(key));
    }
    if (profile.channels.empty())
        raise(ErrorCode::InvalidProfile, path.string() + " declares no channels");
    return profile;
}

void write_level_tracks_csv(const SynthResult& result, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write: " + path.string());
    const auto& rec = result.recording;
    for (std::size_t c = 0; c < rec.channel_count; ++c)
        out << (c ? "," : "") << rec.channel_labels[c];
    out << '\n';
    for (std::size_t t = 0; t < rec.sample_count; ++t) {
        for (std::size_t c = 0; c < rec.channel_count; ++c)
            out << (c ? "," : "") << detail::format_double(result.level_tracks[c][t]);
        out << '\n';
    }
}

} // namespace semgtok
