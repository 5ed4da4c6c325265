// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "semgtok/codebook.hpp"
#include "semgtok/features.hpp"

namespace semgtok {

// Sum of squared distances from each feature to its assigned centroid,
// computed in normalized space with assign_token's assignment rule.
double compute_sse(const std::vector<FeatureVector>& features, const Codebook& cb);

struct PnmiResult {
    double value = 0.0;
    bool degenerate = false; // constant reference sequence
};

// Normalized mutual information I(y;t)/H(y) = 1 - H(y|t)/H(y) of a
// predicted labelling against a reference labelling, estimated from
// co-occurrence counts. Returns 1 (degenerate) when H(y) = 0. Clamped to
// [0, 1]. Not symmetric in its arguments.
PnmiResult compute_pnmi(std::span<const int> reference, std::span<const int> predicted);

struct KSweepRow {
    int k = 0;
    int fold = 0;
    double sse = 0.0;
    std::optional<double> pnmi;
};

struct KSweepSummaryRow {
    int k = 0;
    double sse_mean = 0.0;
    double sse_std = 0.0;
    std::optional<double> pnmi_mean;
    std::optional<double> pnmi_std;
};

struct KSweepReport {
    std::vector<KSweepRow> rows;
    std::vector<KSweepSummaryRow> summary; // std is the population deviation
};

// Cross-validated K sweep: for each fold and each K, train on the other
// folds, measure SSE on the held-out features and (when reference labels
// are supplied) PNMI of the held-out token assignments. Pass an empty
// reference vector for an SSE-only sweep.
KSweepReport sweep_k(const std::vector<std::vector<FeatureVector>>& features_by_fold,
                     const std::vector<std::vector<int>>& reference_labels_by_fold,
                     int k_min,
                     int k_max,
                     const PipelineConfig& cfg);

void write_sweep_csv(const KSweepReport& report, const std::filesystem::path& path);
void write_sweep_summary_csv(const KSweepReport& report, const std::filesystem::path& path);

} // namespace semgtok
