// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "semgtok/config.hpp"
#include "semgtok/features.hpp"

namespace semgtok {

// Inter-clustering comparison of two labellings of the same positions.
struct ConsistencyReport {
    int k = 0;
    // Counts after alignment: rows = strategy B (aligned), columns = A.
    std::vector<std::vector<long long>> confusion;
    // alignment[b] = strategy-A label matched to raw strategy-B label b.
    std::vector<int> alignment;
    double overlap_rate = 0.0;
    double kappa = 0.0;
    double tolerant_agreement = 0.0; // +-1 tolerance on token ranks
};

// Permutation of [0,K) maximizing positionwise agreement when applied to
// labels_b, found by optimal assignment on the co-occurrence counts.
std::vector<int> align_labels(std::span<const int> labels_a,
                              std::span<const int> labels_b,
                              int k);

// Fraction of positions with equal labels.
double overlap_rate(std::span<const int> labels_a, std::span<const int> labels_b);

// Chance-corrected agreement (p_o - p_e) / (1 - p_e); returns 1 when both
// sequences are constant and equal (p_e == 1).
double cohens_kappa(std::span<const int> labels_a,
                    std::span<const int> labels_b,
                    int k);

// Fraction of positions with |a - b| <= tolerance. Tolerance 0 equals
// overlap_rate. Meaningful on activation-ranked token ids.
double tolerant_agreement(std::span<const int> labels_a,
                          std::span<const int> labels_b,
                          int tolerance);

// Strategy A: codebook trained on train_features, applied to test_features.
// Strategy B: independent codebook trained on test_features (offset seed),
// read through its own training assignments. B is aligned to A before the
// metrics are computed.
ConsistencyReport run_consistency_experiment(const std::vector<FeatureVector>& train_features,
                                             const std::vector<FeatureVector>& test_features,
                                             const PipelineConfig& cfg);

// Seed offset applied to strategy B's training so the two clusterings are
// independent even on identical data.
inline constexpr std::uint64_t kIndependentClusteringSeedOffset = 0x9E37;

void write_confusion_csv(const ConsistencyReport& report, const std::filesystem::path& path);
void write_consistency_summary_csv(const ConsistencyReport& report,
                                   const std::filesystem::path& path);

} // namespace semgtok
