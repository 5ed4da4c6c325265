// SPDX-License-Identifier: Apache-2.0
#include "semgtok/quality.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "semgtok/detail/text.hpp"
#include "semgtok/error.hpp"

namespace semgtok {

ActionTokenMatrix encode_action(const std::vector<TokenSequence>& sequences,
                                const Codebook& cb,
                                std::vector<std::string> channel_labels) {
    if (sequences.empty()) raise(ErrorCode::EmptySequence, "no token sequences");
    const std::string fp = cb.fingerprint();
    const std::size_t steps = sequences.front().tokens.size();
    for (const auto& seq : sequences) {
        if (seq.codebook_fingerprint != fp)
            raise(ErrorCode::CodebookMismatch,
                  "sequence was produced by a different codebook");
        if (seq.tokens.size() != steps)
            raise(ErrorCode::LengthMismatch, "channel sequences differ in length");
    }
    if (steps == 0) raise(ErrorCode::EmptySequence, "zero-length token sequences");

    std::vector<std::size_t> order(sequences.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
        return sequences[lhs].channel_index < sequences[rhs].channel_index;
    });

    ActionTokenMatrix m;
    m.step_count = steps;
    m.channel_count = sequences.size();
    m.codebook_fingerprint = fp;
    m.k = cb.k;
    if (channel_labels.empty()) {
        for (std::size_t c : order)
            channel_labels.push_back("ch" + std::to_string(sequences[c].channel_index));
    } else if (channel_labels.size() != sequences.size()) {
        raise(ErrorCode::ChannelMismatch, "channel label count mismatch");
    }
    m.channel_labels = std::move(channel_labels);

    // activation value: rest token (id K-1) -> 0, strongest token (id 0) -> K-1
    m.values.resize(steps * m.channel_count);
    for (std::size_t col = 0; col < order.size(); ++col) {
        const auto& seq = sequences[order[col]];
        for (std::size_t t = 0; t < steps; ++t) {
            const int id = seq.tokens[t];
            if (id < 0 || id >= cb.k)
                raise(ErrorCode::LabelOutOfRange, "token id outside [0, K)");
            m.values[t * m.channel_count + col] = (cb.k - 1) - id;
        }
    }
    return m;
}

namespace {

double pointwise_cost(const ActionTokenMatrix& a, const ActionTokenMatrix& b,
                      std::size_t i, std::size_t j) {
    double acc = 0.0;
    for (std::size_t m = 0; m < a.channel_count; ++m)
        acc += std::abs(static_cast<double>(a.at(i, m)) - static_cast<double>(b.at(j, m)));
    return acc;
}

} // namespace

DtwResult dtw_distance(const ActionTokenMatrix& a, const ActionTokenMatrix& b) {
    if (a.channel_count != b.channel_count)
        raise(ErrorCode::ChannelMismatch, "actions have different channel counts");
    if (a.codebook_fingerprint != b.codebook_fingerprint)
        raise(ErrorCode::CodebookMismatch, "actions come from different codebooks");
    if (a.step_count == 0 || b.step_count == 0)
        raise(ErrorCode::EmptySequence, "empty action sequence");

    const std::size_t la = a.step_count;
    const std::size_t lb = b.step_count;
    std::vector<double> table(la * lb);
    const auto cell = [&](std::size_t i, std::size_t j) -> double& {
        return table[i * lb + j];
    };

    cell(0, 0) = pointwise_cost(a, b, 0, 0);
    for (std::size_t j = 1; j < lb; ++j)
        cell(0, j) = pointwise_cost(a, b, 0, j) + cell(0, j - 1);
    for (std::size_t i = 1; i < la; ++i)
        cell(i, 0) = pointwise_cost(a, b, i, 0) + cell(i - 1, 0);
    for (std::size_t i = 1; i < la; ++i)
        for (std::size_t j = 1; j < lb; ++j)
            cell(i, j) = pointwise_cost(a, b, i, j) +
                         std::min({cell(i - 1, j - 1), cell(i - 1, j), cell(i, j - 1)});

    // backtrack, diagonal preferred, then (i-1, j)
    std::vector<std::pair<std::size_t, std::size_t>> path;
    std::size_t i = la - 1, j = lb - 1;
    path.emplace_back(i, j);
    while (i > 0 || j > 0) {
        if (i == 0) {
            --j;
        } else if (j == 0) {
            --i;
        } else {
            const double diag = cell(i - 1, j - 1);
            const double up = cell(i - 1, j);
            const double left = cell(i, j - 1);
            const double best = std::min({diag, up, left});
            if (diag == best) { --i; --j; }
            else if (up == best) { --i; }
            else { --j; }
        }
        path.emplace_back(i, j);
    }
    std::reverse(path.begin(), path.end());

    DtwResult result;
    result.distance = cell(la - 1, lb - 1);
    result.path_length = path.size();
    result.path = std::move(path);
    return result;
}

SimilarityReport similarity_score(const ActionTokenMatrix& a,
                                  const ActionTokenMatrix& b,
                                  int k) {
    if (k < 2) raise(ErrorCode::InvalidConfig, "similarity needs K >= 2");
    const auto dtw = dtw_distance(a, b);

    SimilarityReport report;
    report.dtw_distance = dtw.distance;
    report.path_length = dtw.path_length;
    const double max_error = static_cast<double>(k - 1);
    const double denom = max_error * static_cast<double>(a.channel_count) *
                         static_cast<double>(dtw.path_length);
    report.similarity_score = std::clamp(1.0 - dtw.distance / denom, 0.0, 1.0);

    report.channel_mean_abs_diff.assign(a.channel_count, 0.0);
    for (const auto& [i, j] : dtw.path)
        for (std::size_t m = 0; m < a.channel_count; ++m)
            report.channel_mean_abs_diff[m] +=
                std::abs(static_cast<double>(a.at(i, m)) - static_cast<double>(b.at(j, m)));
    for (auto& v : report.channel_mean_abs_diff)
        v /= static_cast<double>(dtw.path_length);
    return report;
}

TokenStatistics token_statistics(const TokenSequence& seq, int k) {
    const std::size_t len = seq.tokens.size();
    if (len == 0) raise(ErrorCode::EmptySequence, "empty token sequence");
    for (int id : seq.tokens)
        if (id < 0 || id >= k)
            raise(ErrorCode::LabelOutOfRange, "token id outside [0, K)");

    TokenStatistics stats;
    stats.token_ratios.assign(static_cast<std::size_t>(k), 0.0);
    stats.mean_run_length.assign(static_cast<std::size_t>(k), 0.0);
    stats.max_run_length.assign(static_cast<std::size_t>(k), 0);

    for (int id : seq.tokens) stats.token_ratios[static_cast<std::size_t>(id)] += 1.0;
    for (auto& r : stats.token_ratios) r /= static_cast<double>(len);

    std::size_t changes = 0;
    for (std::size_t t = 0; t + 1 < len; ++t)
        if (seq.tokens[t + 1] != seq.tokens[t]) ++changes;
    stats.transition_frequency =
        len > 1 ? static_cast<double>(changes) / static_cast<double>(len - 1) : 0.0;

    // maximal constant runs per token
    std::vector<std::size_t> run_count(static_cast<std::size_t>(k), 0);
    std::vector<std::size_t> run_total(static_cast<std::size_t>(k), 0);
    std::size_t start = 0;
    for (std::size_t t = 1; t <= len; ++t) {
        if (t == len || seq.tokens[t] != seq.tokens[start]) {
            const auto id = static_cast<std::size_t>(seq.tokens[start]);
            const std::size_t run = t - start;
            ++run_count[id];
            run_total[id] += run;
            stats.max_run_length[id] = std::max(stats.max_run_length[id], run);
            start = t;
        }
    }
    for (std::size_t id = 0; id < static_cast<std::size_t>(k); ++id)
        if (run_count[id] > 0)
            stats.mean_run_length[id] = static_cast<double>(run_total[id]) /
                                        static_cast<double>(run_count[id]);

    // moments on activation values (K-1) - id
    const double n = static_cast<double>(len);
    double mean = 0.0;
    for (int id : seq.tokens) mean += static_cast<double>((k - 1) - id);
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (int id : seq.tokens) {
        const double diff = static_cast<double>((k - 1) - id) - mean;
        m2 += diff * diff;
        m3 += diff * diff * diff;
        m4 += diff * diff * diff * diff;
    }
    m2 /= n; m3 /= n; m4 /= n;
    stats.mean = mean;
    stats.variance = m2;
    if (m2 > 0.0) {
        stats.skewness = m3 / std::pow(m2, 1.5);
        stats.kurtosis = m4 / (m2 * m2) - 3.0;
    } else {
        stats.skewness = 0.0;
        stats.kurtosis = 0.0;
        stats.moments_degenerate = true;
    }
    return stats;
}

TokenSequence replication_pad(const TokenSequence& seq, std::size_t target) {
    if (seq.tokens.empty()) raise(ErrorCode::EmptySequence, "empty token sequence");
    if (target < 1) raise(ErrorCode::InvalidConfig, "target length must be >= 1");
    TokenSequence out = seq;
    if (out.tokens.size() > target) {
        out.tokens.resize(target);
    } else {
        out.tokens.reserve(target);
        while (out.tokens.size() < target) out.tokens.push_back(seq.tokens.back());
    }
    return out;
}

TransitionMatrix transition_matrix(const std::vector<TokenSequence>& sequences, int k) {
    if (sequences.empty()) raise(ErrorCode::EmptySequence, "no token sequences");
    for (const auto& seq : sequences) {
        if (seq.tokens.empty()) raise(ErrorCode::EmptySequence, "empty token sequence");
        for (int id : seq.tokens)
            if (id < 0 || id >= k)
                raise(ErrorCode::LabelOutOfRange, "token id outside [0, K)");
    }

    TransitionMatrix tm;
    tm.rows.assign(static_cast<std::size_t>(k),
                   std::vector<double>(static_cast<std::size_t>(k), 0.0));
    tm.flagged_uniform.assign(static_cast<std::size_t>(k), false);
    for (const auto& seq : sequences)
        for (std::size_t t = 0; t + 1 < seq.tokens.size(); ++t)
            tm.rows[static_cast<std::size_t>(seq.tokens[t])]
                   [static_cast<std::size_t>(seq.tokens[t + 1])] += 1.0;

    for (int row = 0; row < k; ++row) {
        double total = 0.0;
        for (double v : tm.rows[static_cast<std::size_t>(row)]) total += v;
        if (total > 0.0) {
            for (auto& v : tm.rows[static_cast<std::size_t>(row)]) v /= total;
        } else {
            const double uniform = 1.0 / static_cast<double>(k);
            for (auto& v : tm.rows[static_cast<std::size_t>(row)]) v = uniform;
            tm.flagged_uniform[static_cast<std::size_t>(row)] = true;
        }
    }
    return tm;
}

std::vector<std::vector<double>> report_centroid_distances(const Codebook& cb) {
    const auto k = static_cast<std::size_t>(cb.k);
    std::vector<std::vector<double>> dist(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            double acc = 0.0;
            for (std::size_t d = 0; d < kFeatureCount; ++d) {
                const double diff = cb.centroids[i][d] - cb.centroids[j][d];
                acc += diff * diff;
            }
            dist[i][j] = dist[j][i] = std::sqrt(acc);
        }
    return dist;
}

void write_similarity_csv(const SimilarityReport& report,
                          const std::vector<std::string>& channel_labels,
                          const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write: " + path.string());
    out << "dtw_distance,path_length,similarity_score\n";
    out << detail::format_double(report.dtw_distance) << ',' << report.path_length
        << ',' << detail::format_double(report.similarity_score) << '\n';
    out << "channel,mean_abs_token_diff\n";
    for (std::size_t c = 0; c < report.channel_mean_abs_diff.size(); ++c)
        out << (c < channel_labels.size() ? channel_labels[c] : "ch" + std::to_string(c))
            << ',' << detail::format_double(report.channel_mean_abs_diff[c]) << '\n';
}

void write_token_statistics_csv(const std::vector<TokenStatistics>& per_channel,
                                const std::vector<std::string>& channel_labels,
                                int k,
                                const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write: " + path.string());
    out << "channel,label,transition_frequency,mean,variance,skewness,kurtosis,moments_degenerate";
    for (int id = 0; id < k; ++id) out << ",ratio_" << static_cast<char>('A' + id);
    for (int id = 0; id < k; ++id) out << ",mean_run_" << static_cast<char>('A' + id);
    for (int id = 0; id < k; ++id) out << ",max_run_" << static_cast<char>('A' + id);
    out << '\n';
    for (std::size_t c = 0; c < per_channel.size(); ++c) {
        const auto& s = per_channel[c];
        out << c << ','
            << (c < channel_labels.size() ? channel_labels[c] : "ch" + std::to_string(c))
            << ',' << detail::format_double(s.transition_frequency) << ','
            << detail::format_double(s.mean) << ',' << detail::format_double(s.variance)
            << ',' << detail::format_double(s.skewness) << ','
            << detail::format_double(s.kurtosis) << ','
            << (s.moments_degenerate ? 1 : 0);
        for (int id = 0; id < k; ++id)
            out << ',' << detail::format_double(s.token_ratios[static_cast<std::size_t>(id)]);
        for (int id = 0; id < k; ++id)
            out << ',' << detail::format_double(s.mean_run_length[static_cast<std::size_t>(id)]);
        for (int id = 0; id < k; ++id)
            out << ',' << s.max_run_length[static_cast<std::size_t>(id)];
        out << '\n';
    }
}

} // namespace semgtok
