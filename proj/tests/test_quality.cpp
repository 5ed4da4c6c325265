// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "semgtok/quality.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace semgtok;
using testutil::error_code_of;

namespace {

Codebook stub_codebook(int k) {
    Codebook cb;
    cb.k = k;
    cb.normalizer.mean.fill(0.0);
    cb.normalizer.stddev.fill(1.0);
    cb.normalizer.zero_variance.fill(false);
    cb.centroids.assign(static_cast<std::size_t>(k), {});
    for (int c = 0; c < k; ++c)
        cb.centroids[static_cast<std::size_t>(c)][kRms] = static_cast<double>(k - c);
    cb.activation_rank.resize(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) cb.activation_rank[static_cast<std::size_t>(c)] = c;
    return cb;
}

TokenSequence sequence_of(const std::vector<int>& ids, const Codebook& cb,
                          std::size_t channel = 0) {
    TokenSequence seq;
    seq.tokens = ids;
    seq.channel_index = channel;
    seq.codebook_fingerprint = cb.fingerprint();
    return seq;
}

// single-channel action matrix holding raw activation values
ActionTokenMatrix action_from_values(const std::vector<std::vector<int>>& values,
                                     const Codebook& cb) {
    ActionTokenMatrix m;
    m.step_count = values.size();
    m.channel_count = values.front().size();
    m.k = cb.k;
    m.codebook_fingerprint = cb.fingerprint();
    for (std::size_t c = 0; c < m.channel_count; ++c)
        m.channel_labels.push_back("ch" + std::to_string(c));
    for (const auto& row : values)
        for (int v : row) m.values.push_back(v);
    return m;
}

} // namespace

TEST_CASE("encode_action maps token ids to activation values") {
    const auto cb = stub_codebook(13);
    const auto seq = sequence_of({0, 12}, cb); // A then M
    const auto m = encode_action({seq}, cb);
    REQUIRE(m.step_count == 2);
    REQUIRE(m.channel_count == 1);
    CHECK(m.at(0, 0) == 12);
    CHECK(m.at(1, 0) == 0);
}

TEST_CASE("encode_action orders columns by channel index") {
    const auto cb = stub_codebook(4);
    const auto high = sequence_of({0, 0, 0}, cb, 1);
    const auto low = sequence_of({3, 3, 3}, cb, 0);
    const auto m = encode_action({high, low}, cb);
    REQUIRE(m.step_count == 3);
    REQUIRE(m.channel_count == 2);
    CHECK(m.at(0, 0) == 0); // channel 0 was the rest sequence
    CHECK(m.at(0, 1) == 3);
}

TEST_CASE("encode_action guards fingerprints and lengths") {
    const auto cb = stub_codebook(4);
    const auto other = stub_codebook(5);
    auto seq_a = sequence_of({0, 1}, cb, 0);
    auto seq_b = sequence_of({0, 1}, other, 1);
    CHECK(error_code_of([&] { encode_action({seq_a, seq_b}, cb); }) ==
          ErrorCode::CodebookMismatch);
    auto seq_c = sequence_of({0, 1, 2}, cb, 1);
    CHECK(error_code_of([&] { encode_action({seq_a, seq_c}, cb); }) ==
          ErrorCode::LengthMismatch);
}

TEST_CASE("dtw: identical sequences have zero distance along the diagonal") {
    const auto cb = stub_codebook(5);
    const auto a = action_from_values({{0, 2}, {3, 1}, {4, 4}}, cb);
    const auto result = dtw_distance(a, a);
    CHECK(result.distance == 0.0);
    CHECK(result.path_length == 3);
    for (std::size_t t = 0; t < 3; ++t) {
        CHECK(result.path[t].first == t);
        CHECK(result.path[t].second == t);
    }
}

TEST_CASE("dtw: doubled sample aligns for free") {
    const auto cb = stub_codebook(5);
    const auto a = action_from_values({{0}, {0}, {3}}, cb);
    const auto b = action_from_values({{0}, {3}}, cb);
    const auto result = dtw_distance(a, b);
    CHECK(result.distance == 0.0);
    CHECK(result.distance ==
          oracle::brute_force_dtw({{0}, {0}, {3}}, {{0}, {3}}));
}

TEST_CASE("dtw: one-cell table") {
    const auto cb = stub_codebook(6);
    const auto a = action_from_values({{5}}, cb);
    const auto b = action_from_values({{2}}, cb);
    const auto result = dtw_distance(a, b);
    CHECK(result.distance == 3.0);
    CHECK(result.path_length == 1);
}

TEST_CASE("dtw equals exhaustive path enumeration for short sequences") {
    const auto cb = stub_codebook(4);
    detail::Rng rng(1234);
    for (std::size_t la = 1; la <= 6; ++la)
        for (std::size_t lb = 1; lb <= 6; ++lb)
            for (int trial = 0; trial < 40; ++trial) {
                std::vector<std::vector<int>> va(la, std::vector<int>(1));
                std::vector<std::vector<int>> vb(lb, std::vector<int>(1));
                for (auto& row : va) row[0] = static_cast<int>(rng.uniform_index(4));
                for (auto& row : vb) row[0] = static_cast<int>(rng.uniform_index(4));
                const auto result =
                    dtw_distance(action_from_values(va, cb), action_from_values(vb, cb));
                CHECK(result.distance == oracle::brute_force_dtw(va, vb));
            }
}

TEST_CASE("dtw distance is symmetric") {
    const auto cb = stub_codebook(4);
    detail::Rng rng(555);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t la = 1 + rng.uniform_index(10);
        const std::size_t lb = 1 + rng.uniform_index(10);
        std::vector<std::vector<int>> va(la, std::vector<int>(2));
        std::vector<std::vector<int>> vb(lb, std::vector<int>(2));
        for (auto& row : va)
            for (auto& v : row) v = static_cast<int>(rng.uniform_index(4));
        for (auto& row : vb)
            for (auto& v : row) v = static_cast<int>(rng.uniform_index(4));
        const auto ab = dtw_distance(action_from_values(va, cb), action_from_values(vb, cb));
        const auto ba = dtw_distance(action_from_values(vb, cb), action_from_values(va, cb));
        CHECK(ab.distance == ba.distance);
    }
}

TEST_CASE("dtw guards: channel count, fingerprint, emptiness") {
    const auto cb = stub_codebook(4);
    const auto a = action_from_values({{0, 1}}, cb);
    const auto b = action_from_values({{0}}, cb);
    CHECK(error_code_of([&] { dtw_distance(a, b); }) == ErrorCode::ChannelMismatch);
    auto c = action_from_values({{0, 1}}, cb);
    c.codebook_fingerprint = "feedfacefeedface";
    CHECK(error_code_of([&] { dtw_distance(a, c); }) == ErrorCode::CodebookMismatch);
}

TEST_CASE("similarity: identical actions score exactly 1") {
    const auto cb = stub_codebook(13);
    const auto a = action_from_values({{3, 7}, {12, 0}, {5, 5}}, cb);
    const auto report = similarity_score(a, a, cb.k);
    CHECK(report.similarity_score == 1.0);
    CHECK(report.dtw_distance == 0.0);
}

TEST_CASE("similarity: single maximal-error step scores exactly 0") {
    const auto cb = stub_codebook(13);
    const auto a = action_from_values({{12}}, cb);
    const auto b = action_from_values({{0}}, cb);
    const auto report = similarity_score(a, b, cb.k);
    CHECK(report.dtw_distance == 12.0);
    CHECK(report.path_length == 1);
    CHECK(report.similarity_score == 0.0);
}

TEST_CASE("similarity: two-channel pair matches the hand-applied formula") {
    const auto cb = stub_codebook(5);
    const std::vector<std::vector<int>> va{{0, 4}, {2, 2}, {4, 0}};
    const std::vector<std::vector<int>> vb{{1, 3}, {4, 1}};
    const auto a = action_from_values(va, cb);
    const auto b = action_from_values(vb, cb);
    const auto report = similarity_score(a, b, cb.k);

    const double brute = oracle::brute_force_dtw(va, vb);
    CHECK(report.dtw_distance == brute);
    const double expected =
        1.0 - brute / (4.0 * 2.0 * static_cast<double>(report.path_length));
    CHECK(report.similarity_score == doctest::Approx(expected).epsilon(1e-12));
    CHECK(report.channel_mean_abs_diff.size() == 2);
}

TEST_CASE("token_statistics: constant sequence") {
    const auto cb = stub_codebook(13);
    const auto seq = sequence_of(std::vector<int>(10, 4), cb);
    const auto stats = token_statistics(seq, cb.k);
    CHECK(stats.token_ratios[4] == 1.0);
    CHECK(stats.transition_frequency == 0.0);
    CHECK(stats.mean_run_length[4] == 10.0);
    CHECK(stats.max_run_length[4] == 10);
    CHECK(stats.variance == 0.0);
    CHECK(stats.skewness == 0.0);
    CHECK(stats.kurtosis == 0.0);
    CHECK(stats.moments_degenerate);
    CHECK(stats.mean == 8.0); // activation value (13-1) - 4
}

TEST_CASE("token_statistics: alternating two-token sequence") {
    const auto cb = stub_codebook(2);
    const auto seq = sequence_of({0, 1, 0, 1}, cb);
    const auto stats = token_statistics(seq, cb.k);
    CHECK(stats.transition_frequency == 1.0);
    CHECK(stats.token_ratios[0] == 0.5);
    CHECK(stats.token_ratios[1] == 0.5);
    CHECK(stats.mean == 0.5);
    CHECK(stats.variance == 0.25);
    CHECK(stats.skewness == 0.0);
    CHECK(stats.kurtosis == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK_FALSE(stats.moments_degenerate);
    CHECK(stats.mean_run_length[0] == 1.0);
    CHECK(stats.max_run_length[1] == 1);
}

TEST_CASE("token_statistics: moments match a naive loop on long sequences") {
    const auto cb = stub_codebook(13);
    detail::Rng rng(2024);
    std::vector<int> ids(10000);
    for (auto& v : ids) v = static_cast<int>(rng.uniform_index(13));
    const auto stats = token_statistics(sequence_of(ids, cb), cb.k);

    const double n = 10000.0;
    double mean = 0;
    for (int id : ids) mean += 12.0 - id;
    mean /= n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (int id : ids) {
        const double d = (12.0 - id) - mean;
        m2 += d * d; m3 += d * d * d; m4 += d * d * d * d;
    }
    m2 /= n; m3 /= n; m4 /= n;
    CHECK(oracle::rel_close(stats.mean, mean, 1e-9));
    CHECK(oracle::rel_close(stats.variance, m2, 1e-9));
    CHECK(oracle::rel_close(stats.skewness, m3 / std::pow(m2, 1.5), 1e-9));
    CHECK(oracle::rel_close(stats.kurtosis, m4 / (m2 * m2) - 3.0, 1e-9));

    double ratio_sum = 0;
    for (double r : stats.token_ratios) ratio_sum += r;
    CHECK(std::abs(ratio_sum - 1.0) <= 1e-12);
    CHECK(stats.transition_frequency >= 0.0);
    CHECK(stats.transition_frequency <= 1.0);
}

TEST_CASE("token_statistics: single-element sequence has zero transition frequency") {
    const auto cb = stub_codebook(3);
    const auto stats = token_statistics(sequence_of({1}, cb), cb.k);
    CHECK(stats.transition_frequency == 0.0);
    CHECK(stats.moments_degenerate);
}

TEST_CASE("replication_pad extends, keeps, or truncates") {
    const auto cb = stub_codebook(5);
    const auto seq = sequence_of({2, 3}, cb);
    CHECK(replication_pad(seq, 4).tokens == std::vector<int>{2, 3, 3, 3});
    CHECK(replication_pad(seq, 2).tokens == std::vector<int>{2, 3});
    const auto longer = sequence_of({1, 2, 3, 4}, cb);
    CHECK(replication_pad(longer, 2).tokens == std::vector<int>{1, 2});
    CHECK(error_code_of([&] { replication_pad(sequence_of({}, cb), 3); }) ==
          ErrorCode::EmptySequence);
}

TEST_CASE("transition_matrix: constant and alternating sequences") {
    const auto cb = stub_codebook(3);
    const auto tm = transition_matrix({sequence_of({0, 0, 0}, cb)}, cb.k);
    CHECK(tm.rows[0][0] == 1.0);
    CHECK_FALSE(tm.flagged_uniform[0]);
    CHECK(tm.flagged_uniform[1]);
    CHECK(tm.rows[1][0] == doctest::Approx(1.0 / 3.0));

    const auto alt = transition_matrix({sequence_of({0, 1, 0, 1, 0}, cb)}, cb.k);
    CHECK(alt.rows[0][1] == 1.0);
    CHECK(alt.rows[1][0] == 1.0);
}

TEST_CASE("transition_matrix matches a count-and-normalize loop on pooled sequences") {
    const auto cb = stub_codebook(5);
    detail::Rng rng(31337);
    std::vector<TokenSequence> sequences;
    for (int s = 0; s < 4; ++s) {
        std::vector<int> ids(200);
        for (auto& v : ids) v = static_cast<int>(rng.uniform_index(5));
        sequences.push_back(sequence_of(ids, cb, static_cast<std::size_t>(s)));
    }
    const auto tm = transition_matrix(sequences, cb.k);

    std::vector<std::vector<double>> counts(5, std::vector<double>(5, 0.0));
    for (const auto& seq : sequences)
        for (std::size_t t = 0; t + 1 < seq.tokens.size(); ++t)
            counts[static_cast<std::size_t>(seq.tokens[t])]
                  [static_cast<std::size_t>(seq.tokens[t + 1])] += 1.0;
    for (int i = 0; i < 5; ++i) {
        double row_total = 0;
        for (double v : counts[static_cast<std::size_t>(i)]) row_total += v;
        double row_sum = 0;
        for (int j = 0; j < 5; ++j) {
            CHECK(tm.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                  counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] / row_total);
            row_sum += tm.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        CHECK(std::abs(row_sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("centroid distances: symmetric, zero diagonal, matches naive loop") {
    const auto blobs = oracle::make_blobs(4, 40, 10.0, 1.0, 77);
    PipelineConfig cfg;
    cfg.k_clusters = 4;
    const Codebook cb = train_codebook(blobs.features, cfg);
    const auto dist = report_centroid_distances(cb);
    for (int i = 0; i < 4; ++i) {
        CHECK(dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] == 0.0);
        for (int j = 0; j < 4; ++j) {
            CHECK(dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                  dist[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
            double acc = 0;
            for (std::size_t d = 0; d < kFeatureCount; ++d) {
                const double diff = cb.centroids[static_cast<std::size_t>(i)][d] -
                                    cb.centroids[static_cast<std::size_t>(j)][d];
                acc += diff * diff;
            }
            CHECK(std::abs(dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                           std::sqrt(acc)) <= 1e-12);
        }
    }

    const auto two = stub_codebook(2);
    const auto d2 = report_centroid_distances(two);
    CHECK(d2[0][1] == doctest::Approx(1.0)); // rms 2 vs 1, one dimension
}
