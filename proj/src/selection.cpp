// SPDX-License-Identifier: Apache-2.0
#include "semgtok/selection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "semgtok/detail/text.hpp"
#include "semgtok/error.hpp"

namespace semgtok {

double compute_sse(const std::vector<FeatureVector>& features, const Codebook& cb) {
    double sse = 0.0;
    for (const auto& f : features) {
        const int token = assign_token(f, cb);
        const auto normalized = apply_normalizer(cb.normalizer, f);
        const auto& centroid = cb.centroids[static_cast<std::size_t>(token)];
        for (std::size_t d = 0; d < kFeatureCount; ++d) {
            const double diff = normalized.values[d] - centroid[d];
            sse += diff * diff;
        }
    }
    return sse;
}

PnmiResult compute_pnmi(std::span<const int> reference, std::span<const int> predicted) {
    if (reference.size() != predicted.size())
        raise(ErrorCode::LengthMismatch, "reference and predicted lengths differ");
    if (reference.empty()) raise(ErrorCode::EmptySequence, "empty label sequences");
    const double total = static_cast<double>(reference.size());

    std::map<int, double> ref_counts, pred_counts;
    std::map<std::pair<int, int>, double> joint_counts;
    for (std::size_t t = 0; t < reference.size(); ++t) {
        ref_counts[reference[t]] += 1.0;
        pred_counts[predicted[t]] += 1.0;
        joint_counts[{reference[t], predicted[t]}] += 1.0;
    }

    double h_ref = 0.0;
    for (const auto& [label, count] : ref_counts) {
        const double p = count / total;
        h_ref -= p * std::log(p);
    }
    if (h_ref == 0.0) return {1.0, true};

    // H(y|t) = -sum_ij p(i,j) log( p(i,j) / p_t(j) ), 0 log 0 = 0
    double h_cond = 0.0;
    for (const auto& [pair, count] : joint_counts) {
        const double p_joint = count / total;
        const double p_pred = pred_counts[pair.second] / total;
        h_cond -= p_joint * std::log(p_joint / p_pred);
    }

    double value = 1.0 - h_cond / h_ref;
    value = std::clamp(value, 0.0, 1.0);
    return {value, false};
}

KSweepReport sweep_k(const std::vector<std::vector<FeatureVector>>& features_by_fold,
                     const std::vector<std::vector<int>>& reference_labels_by_fold,
                     int k_min,
                     int k_max,
                     const PipelineConfig& cfg) {
    if (features_by_fold.size() < 2)
        raise(ErrorCode::InsufficientData, "sweep needs at least 2 folds");
    if (k_min < 2 || k_min > k_max)
        raise(ErrorCode::InvalidConfig, "need 2 <= k_min <= k_max");

    const bool with_pnmi = !reference_labels_by_fold.empty();
    if (with_pnmi) {
        if (reference_labels_by_fold.size() != features_by_fold.size())
            raise(ErrorCode::MissingReference,
                  "reference labels missing for some folds");
        for (std::size_t f = 0; f < features_by_fold.size(); ++f)
            if (reference_labels_by_fold[f].size() != features_by_fold[f].size())
                raise(ErrorCode::LengthMismatch,
                      "fold " + std::to_string(f) +
                          ": reference labels do not match feature count");
    }

    KSweepReport report;
    const int fold_count = static_cast<int>(features_by_fold.size());
    for (int k = k_min; k <= k_max; ++k) {
        for (int fold = 0; fold < fold_count; ++fold) {
            std::vector<FeatureVector> train;
            for (int other = 0; other < fold_count; ++other)
                if (other != fold)
                    train.insert(train.end(), features_by_fold[static_cast<std::size_t>(other)].begin(),
                                 features_by_fold[static_cast<std::size_t>(other)].end());

            PipelineConfig fold_cfg = cfg;
            fold_cfg.k_clusters = k;
            const Codebook cb = train_codebook(train, fold_cfg);

            const auto& held_out = features_by_fold[static_cast<std::size_t>(fold)];
            KSweepRow row;
            row.k = k;
            row.fold = fold;
            row.sse = compute_sse(held_out, cb);
            if (with_pnmi) {
                std::vector<int> predicted;
                predicted.reserve(held_out.size());
                for (const auto& f : held_out) predicted.push_back(assign_token(f, cb));
                row.pnmi = compute_pnmi(reference_labels_by_fold[static_cast<std::size_t>(fold)],
                                        predicted).value;
            }
            report.rows.push_back(row);
        }
    }

    for (int k = k_min; k <= k_max; ++k) {
        double sse_sum = 0.0, pnmi_sum = 0.0;
        int n = 0;
        for (const auto& row : report.rows)
            if (row.k == k) {
                sse_sum += row.sse;
                if (row.pnmi) pnmi_sum += *row.pnmi;
                ++n;
            }
        KSweepSummaryRow summary;
        summary.k = k;
        summary.sse_mean = sse_sum / n;
        double sse_ss = 0.0, pnmi_ss = 0.0;
        for (const auto& row : report.rows)
            if (row.k == k) {
                sse_ss += (row.sse - summary.sse_mean) * (row.sse - summary.sse_mean);
                if (row.pnmi)
                    pnmi_ss += (*row.pnmi - pnmi_sum / n) * (*row.pnmi - pnmi_sum / n);
            }
        summary.sse_std = std::sqrt(sse_ss / n);
        if (with_pnmi) {
            summary.pnmi_mean = pnmi_sum / n;
            summary.pnmi_std = std::sqrt(pnmi_ss / n);
        }
        report.summary.push_back(summary);
    }
    return report;
}

void write_sweep_csv(const KSweepReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write: " + path.string());
    out << "K,fold,sse,pnmi\n";
    for (const auto& row : report.rows) {
        out << row.k << ',' << row.fold << ',' << detail::format_double(row.sse) << ',';
        if (row.pnmi) out << detail::format_double(*row.pnmi);
        out << '\n';
    }
}

void write_sweep_summary_csv(const KSweepReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write: " + path.string());
    out << "K,sse_mean,sse_std,pnmi_mean,pnmi_std\n";
    for (const auto& row : report.summary) {
        out << row.k << ',' << detail::format_double(row.sse_mean) << ','
            << detail::format_double(row.sse_std) << ',';
        if (row.pnmi_mean) out << detail::format_double(*row.pnmi_mean);
        out << ',';
        if (row.pnmi_std) out << detail::format_double(*row.pnmi_std);
        out << '\n';
    }
}

} // namespace semgtok
