// SPDX-License-Identifier: Apache-2.0
#include "semgtok/consistency.hpp"

#include <cmath>
#include <fstream>

#include "semgtok/codebook.hpp"
#include "semgtok/detail/hungarian.hpp"
#include "semgtok/detail/text.hpp"
#include "semgtok/error.hpp"

namespace semgtok {

namespace {

void check_labels(std::span<const int> labels, int k, const char* which) {
    for (int v : labels)
        if (v < 0 || v >= k)
            raise(ErrorCode::LabelOutOfRange,
                  std::string(which) + " label " + std::to_string(v) +
                      " outside [0, " + std::to_string(k) + ")");
}

} // namespace

std::vector<int> align_labels(std::span<const int> labels_a,
                              std::span<const int> labels_b,
                              int k) {
    if (labels_a.size() != labels_b.size())
        raise(ErrorCode::LengthMismatch, "label sequences differ in length");
    check_labels(labels_a, k, "strategy A");
    check_labels(labels_b, k, "strategy B");

    // co-occurrence counts: counts[a][b]
    std::vector<std::vector<double>> counts(static_cast<std::size_t>(k),
                                            std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (std::size_t t = 0; t < labels_a.size(); ++t)
        counts[static_cast<std::size_t>(labels_a[t])][static_cast<std::size_t>(labels_b[t])] += 1.0;

    // maximize agreement == minimize (max - count); rows are B labels so the
    // returned assignment maps each B label to an A label
    double max_count = 0.0;
    for (const auto& row : counts)
        for (double c : row) max_count = std::max(max_count, c);
    std::vector<std::vector<double>> cost(static_cast<std::size_t>(k),
                                          std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            cost[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] =
                max_count - counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    return detail::hungarian_min_cost(cost);
}

double overlap_rate(std::span<const int> labels_a, std::span<const int> labels_b) {
    if (labels_a.size() != labels_b.size())
        raise(ErrorCode::LengthMismatch, "label sequences differ in length");
    if (labels_a.empty()) raise(ErrorCode::EmptySequence, "empty label sequences");
    std::size_t agree = 0;
    for (std::size_t t = 0; t < labels_a.size(); ++t)
        if (labels_a[t] == labels_b[t]) ++agree;
    return static_cast<double>(agree) / static_cast<double>(labels_a.size());
}

double cohens_kappa(std::span<const int> labels_a,
                    std::span<const int> labels_b,
                    int k) {
    if (labels_a.size() != labels_b.size())
        raise(ErrorCode::LengthMismatch, "label sequences differ in length");
    if (labels_a.empty()) raise(ErrorCode::EmptySequence, "empty label sequences");
    check_labels(labels_a, k, "strategy A");
    check_labels(labels_b, k, "strategy B");

    const double total = static_cast<double>(labels_a.size());
    std::vector<double> count_a(static_cast<std::size_t>(k), 0.0);
    std::vector<double> count_b(static_cast<std::size_t>(k), 0.0);
    double agree = 0.0;
    for (std::size_t t = 0; t < labels_a.size(); ++t) {
        count_a[static_cast<std::size_t>(labels_a[t])] += 1.0;
        count_b[static_cast<std::size_t>(labels_b[t])] += 1.0;
        if (labels_a[t] == labels_b[t]) agree += 1.0;
    }
    const double p_o = agree / total;
    double p_e = 0.0;
    for (int c = 0; c < k; ++c)
        p_e += (count_a[static_cast<std::size_t>(c)] / total) *
               (count_b[static_cast<std::size_t>(c)] / total);
    if (p_e == 1.0) return 1.0;
    return (p_o - p_e) / (1.0 - p_e);
}

double tolerant_agreement(std::span<const int> labels_a,
                          std::span<const int> labels_b,
                          int tolerance) {
    if (labels_a.size() != labels_b.size())
        raise(ErrorCode::LengthMismatch, "label sequences differ in length");
    if (labels_a.empty()) raise(ErrorCode::EmptySequence, "empty label sequences");
    if (tolerance < 0) raise(ErrorCode::InvalidConfig, "tolerance must be >= 0");
    std::size_t within = 0;
    for (std::size_t t = 0; t < labels_a.size(); ++t)
        if (std::abs(labels_a[t] - labels_b[t]) <= tolerance) ++within;
    return static_cast<double>(within) / static_cast<double>(labels_a.size());
}

ConsistencyReport run_consistency_experiment(const std::vector<FeatureVector>& train_features,
                                             const std::vector<FeatureVector>& test_features,
                                             const PipelineConfig& cfg) {
    const int k = cfg.k_clusters;

    // strategy A: codebook from the training set applied to the test set
    const Codebook cb_a = train_codebook(train_features, cfg);
    std::vector<int> labels_a;
    labels_a.reserve(test_features.size());
    for (const auto& f : test_features) labels_a.push_back(assign_token(f, cb_a));

    // strategy B: independent clustering of the test set itself
    PipelineConfig cfg_b = cfg;
    cfg_b.rng_seed = cfg.rng_seed + kIndependentClusteringSeedOffset;
    TrainingDiagnostics diag_b;
    const Codebook cb_b = train_codebook(test_features, cfg_b, &diag_b);
    const std::vector<int>& labels_b = diag_b.final_assignments;

    const auto alignment = align_labels(labels_a, labels_b, k);
    std::vector<int> aligned_b(labels_b.size());
    for (std::size_t t = 0; t < labels_b.size(); ++t)
        aligned_b[t] = alignment[static_cast<std::size_t>(labels_b[t])];

    ConsistencyReport report;
    report.k = k;
    report.alignment = alignment;
    report.confusion.assign(static_cast<std::size_t>(k),
                            std::vector<long long>(static_cast<std::size_t>(k), 0));
    for (std::size_t t = 0; t < labels_a.size(); ++t)
        ++report.confusion[static_cast<std::size_t>(aligned_b[t])]
                          [static_cast<std::size_t>(labels_a[t])];
    report.overlap_rate = overlap_rate(labels_a, aligned_b);
    report.kappa = cohens_kappa(labels_a, aligned_b, k);
    report.tolerant_agreement = tolerant_agreement(labels_a, aligned_b, 1);
    return report;
}

void write_confusion_csv(const ConsistencyReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write: " + path.string());
    out << "b_aligned\\a";
    for (int a = 0; a < report.k; ++a) out << ',' << static_cast<char>('A' + a);
    out << '\n';
    for (int b = 0; b < report.k; ++b) {
        out << static_cast<char>('A' + b);
        for (int a = 0; a < report.k; ++a)
            out << ',' << report.confusion[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
        out << '\n';
    }
}

void write_consistency_summary_csv(const ConsistencyReport& report,
                                   const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write: " + path.string());
    out << "overlap_rate,kappa,tolerant_agreement,alignment\n";
    out << detail::format_double(report.overlap_rate) << ','
        << detail::format_double(report.kappa) << ','
        << detail::format_double(report.tolerant_agreement) << ',';
    for (std::size_t b = 0; b < report.alignment.size(); ++b)
        out << (b ? ";" : "") << report.alignment[b];
    out << '\n';
}

} // namespace semgtok
