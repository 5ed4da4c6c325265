// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "semgtok/detail/rng.hpp"
#include "semgtok/segment.hpp"
#include "support/test_util.hpp"

using namespace semgtok;
using testutil::error_code_of;

namespace {

// brute-force enumeration of valid window start indices
std::size_t enumerate_starts(std::size_t total, std::size_t window, std::size_t stride) {
    std::size_t count = 0;
    for (std::size_t start = 0; start + window <= total; start += stride) ++count;
    return count;
}

Recording constant_recording(std::size_t samples, double fs) {
    return Recording::create(std::vector<double>(samples, 1.0), samples, 1, fs, {});
}

} // namespace

TEST_CASE("exactly one window when the recording equals the window") {
    PipelineConfig cfg;
    const std::size_t w = window_samples(1259.0, cfg);
    const auto segments = segment_channel(constant_recording(w, 1259.0), 0, cfg);
    REQUIRE(segments.size() == 1);
    CHECK(segments[0].start_sample == 0);
    CHECK(segments[0].values.size() == w);
}

TEST_CASE("1000 samples at 1259 Hz yield 31 windows of 62 samples") {
    PipelineConfig cfg;
    CHECK(window_samples(1259.0, cfg) == 62);
    CHECK(stride_samples(1259.0, cfg) == 31);
    const auto segments = segment_channel(constant_recording(1000, 1259.0), 0, cfg);
    CHECK(segments.size() == 31);
    CHECK(segments.size() == enumerate_starts(1000, 62, 31));
}

TEST_CASE("one sample short of a window is an error") {
    PipelineConfig cfg;
    const std::size_t w = window_samples(1259.0, cfg);
    CHECK(error_code_of([&] {
              segment_channel(constant_recording(w - 1, 1259.0), 0, cfg);
          }) == ErrorCode::RecordingShorterThanWindow);
}

TEST_CASE("segment values are exact slices of the channel") {
    PipelineConfig cfg;
    detail::Rng rng(17);
    std::vector<double> samples(900);
    for (auto& v : samples) v = rng.normal();
    const Recording rec = Recording::create(samples, 450, 2, 1259.0, {"a", "b"});
    for (std::size_t c = 0; c < 2; ++c) {
        const auto channel = rec.channel(c);
        for (const auto& seg : segment_channel(rec, c, cfg)) {
            for (std::size_t t = 0; t < seg.values.size(); ++t)
                CHECK(seg.values[t] == channel[seg.start_sample + t]);
        }
    }
}

TEST_CASE("window count formula matches enumeration on randomized shapes") {
    PipelineConfig cfg;
    detail::Rng rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        const double fs = 200.0 + rng.uniform01() * 3800.0;
        const std::size_t w = window_samples(fs, cfg);
        const std::size_t stride = stride_samples(fs, cfg);
        const std::size_t total = w + rng.uniform_index(5000);
        CHECK(segment_count(total, w, stride) == enumerate_starts(total, w, stride));
    }
}

TEST_CASE("unknown channel index is rejected") {
    PipelineConfig cfg;
    CHECK(error_code_of([&] {
              segment_channel(constant_recording(100, 1259.0), 3, cfg);
          }) == ErrorCode::ChannelMismatch);
}
