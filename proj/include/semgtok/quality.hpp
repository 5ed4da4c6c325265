// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "semgtok/codebook.hpp"

namespace semgtok {

// Multichannel token sequence encoded as activation values: a token id is
// mapped to (K-1) - id, so the rest token is 0 and the strongest token is
// K-1. Row-major, one row per time step, one column per channel.
struct ActionTokenMatrix {
    std::vector<int> values; // step_count * channel_count
    std::size_t step_count = 0;
    std::size_t channel_count = 0;
    std::vector<std::string> channel_labels;
    std::string codebook_fingerprint;
    int k = 0;

    int at(std::size_t t, std::size_t c) const {
        return values[t * channel_count + c];
    }
};

ActionTokenMatrix encode_action(const std::vector<TokenSequence>& sequences,
                                const Codebook& cb,
                                std::vector<std::string> channel_labels = {});

struct DtwResult {
    double distance = 0.0;
    std::size_t path_length = 0;
    std::vector<std::pair<std::size_t, std::size_t>> path; // (i, j) cells
};

// Classic three-predecessor dynamic time warping with L1 pointwise cost
// summed across channels. Backtracking prefers the diagonal predecessor,
// then (i-1, j), so the optimal path and its length are deterministic.
DtwResult dtw_distance(const ActionTokenMatrix& a, const ActionTokenMatrix& b);

struct SimilarityReport {
    double dtw_distance = 0.0;
    std::size_t path_length = 0;
    double similarity_score = 0.0; // 1 - dist / ((K-1) * C * path_length)
    std::vector<double> channel_mean_abs_diff; // along the optimal path
};

SimilarityReport similarity_score(const ActionTokenMatrix& a,
                                  const ActionTokenMatrix& b,
                                  int k);

// Per-channel statistical descriptors of one token sequence. Moments are
// computed on activation values (K-1) - id; ratios and run lengths are
// indexed by token id.
struct TokenStatistics {
    std::vector<double> token_ratios;      // size K, sums to 1
    double transition_frequency = 0.0;     // changes / (L-1), 0 for L == 1
    std::vector<double> mean_run_length;   // per token, 0 when absent
    std::vector<std::size_t> max_run_length;
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0; // 0 and flagged when variance == 0
    double kurtosis = 0.0; // excess kurtosis, same flagging
    bool moments_degenerate = false;
};

TokenStatistics token_statistics(const TokenSequence& seq, int k);

// Repeats the final token up to length `target`, or truncates keeping the
// head; identity when lengths already match.
TokenSequence replication_pad(const TokenSequence& seq, std::size_t target);

struct TransitionMatrix {
    std::vector<std::vector<double>> rows; // K x K, rows sum to 1
    std::vector<bool> flagged_uniform;     // rows with no observed outgoing pair
};

// Bigram transition probabilities pooled across sequences.
TransitionMatrix transition_matrix(const std::vector<TokenSequence>& sequences, int k);

// Pairwise Euclidean distances between centroids in normalized space.
std::vector<std::vector<double>> report_centroid_distances(const Codebook& cb);

void write_similarity_csv(const SimilarityReport& report,
                          const std::vector<std::string>& channel_labels,
                          const std::filesystem::path& path);
void write_token_statistics_csv(const std::vector<TokenStatistics>& per_channel,
                                const std::vector<std::string>& channel_labels,
                                int k,
                                const std::filesystem::path& path);

} // namespace semgtok
