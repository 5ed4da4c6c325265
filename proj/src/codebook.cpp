// SPDX-License-Identifier: Apache-2.0
#include "semgtok/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "semgtok/detail/rng.hpp"
#include "semgtok/detail/text.hpp"
#include "semgtok/error.hpp"
#include "semgtok/filter.hpp"

namespace semgtok {

namespace {

using Point = std::array<double, kFeatureCount>;

double squared_distance(const Point& a, const Point& b) {
    double acc = 0.0;
    for (std::size_t d = 0; d < kFeatureCount; ++d) {
        const double diff = a[d] - b[d];
        acc += diff * diff;
    }
    return acc;
}

int nearest_centroid(const Point& p, const std::vector<Point>& centroids) {
    int best = 0;
    double best_dist = squared_distance(p, centroids[0]);
    for (std::size_t k = 1; k < centroids.size(); ++k) {
        const double dist = squared_distance(p, centroids[k]);
        if (dist < best_dist) {
            best_dist = dist;
            best = static_cast<int>(k);
        }
    }
    return best;
}

// k-means++: each next center drawn with probability proportional to the
// squared distance to the nearest already-chosen center. Cumulative-sum
// walk in index order keeps the draw deterministic.
std::vector<Point> seed_centroids(const std::vector<Point>& points,
                                  int k,
                                  detail::Rng& rng) {
    const std::size_t n = points.size();
    std::vector<Point> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    std::vector<char> is_center(n, 0);

    const std::size_t first = rng.uniform_index(n);
    centroids.push_back(points[first]);
    is_center[first] = 1;

    std::vector<double> dist_sq(n);
    for (std::size_t i = 0; i < n; ++i)
        dist_sq[i] = squared_distance(points[i], centroids[0]);

    while (centroids.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += dist_sq[i];
        std::size_t chosen = n;
        if (total > 0.0) {
            const double target = rng.uniform01() * total;
            double cumulative = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cumulative += dist_sq[i];
                if (cumulative > target) { chosen = i; break; }
            }
            if (chosen == n) { // fp round-off on the last bin
                for (std::size_t i = n; i-- > 0;)
                    if (dist_sq[i] > 0.0) { chosen = i; break; }
            }
        } else {
            for (std::size_t i = 0; i < n; ++i)
                if (!is_center[i]) { chosen = i; break; }
        }
        is_center[chosen] = 1;
        centroids.push_back(points[chosen]);
        for (std::size_t i = 0; i < n; ++i)
            dist_sq[i] = std::min(dist_sq[i], squared_distance(points[i], centroids.back()));
    }
    return centroids;
}

struct LloydRun {
    std::vector<Point> centroids;
    std::vector<int> assignments;
    std::vector<double> sse_trace;
    double final_sse = 0.0;
    int iterations = 0;
};

LloydRun run_lloyd(const std::vector<Point>& points,
                   int k,
                   std::uint64_t seed,
                   int max_iter,
                   double rel_tol) {
    const std::size_t n = points.size();
    detail::Rng rng(seed);
    LloydRun run;
    run.centroids = seed_centroids(points, k, rng);
    run.assignments.assign(n, 0);

    double prev_sse = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iter; ++iter) {
        // assignment step
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            run.assignments[i] = nearest_centroid(points[i], run.centroids);
            sse += squared_distance(points[i], run.centroids[static_cast<std::size_t>(run.assignments[i])]);
        }

        // empty-cluster repair: give each empty cluster the point farthest
        // from its current centroid (lowest index on ties)
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (int a : run.assignments) ++counts[static_cast<std::size_t>(a)];
        for (int empty = 0; empty < k; ++empty) {
            if (counts[static_cast<std::size_t>(empty)] != 0) continue;
            std::size_t farthest = 0;
            double far_dist = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[static_cast<std::size_t>(run.assignments[i])] <= 1) continue;
                const double dist = squared_distance(
                    points[i], run.centroids[static_cast<std::size_t>(run.assignments[i])]);
                if (dist > far_dist) { far_dist = dist; farthest = i; }
            }
            sse -= far_dist;
            --counts[static_cast<std::size_t>(run.assignments[farthest])];
            run.assignments[farthest] = empty;
            counts[static_cast<std::size_t>(empty)] = 1;
            run.centroids[static_cast<std::size_t>(empty)] = points[farthest];
        }

        run.sse_trace.push_back(sse);
        run.iterations = iter + 1;

        // update step: accumulate in index order for reproducibility
        std::vector<Point> sums(static_cast<std::size_t>(k), Point{});
        std::vector<std::size_t> members(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(run.assignments[i]);
            for (std::size_t d = 0; d < kFeatureCount; ++d)
                sums[c][d] += points[i][d];
            ++members[c];
        }
        for (int c = 0; c < k; ++c)
            if (members[static_cast<std::size_t>(c)] > 0)
                for (std::size_t d = 0; d < kFeatureCount; ++d)
                    run.centroids[static_cast<std::size_t>(c)][d] =
                        sums[static_cast<std::size_t>(c)][d] /
                        static_cast<double>(members[static_cast<std::size_t>(c)]);

        if (prev_sse != std::numeric_limits<double>::infinity()) {
            const double improvement = prev_sse > 0.0 ? (prev_sse - sse) / prev_sse : 0.0;
            if (improvement < rel_tol) { prev_sse = sse; break; }
        }
        prev_sse = sse;
    }

    // final assignment against the last centroid update
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        run.assignments[i] = nearest_centroid(points[i], run.centroids);
        sse += squared_distance(points[i], run.centroids[static_cast<std::size_t>(run.assignments[i])]);
    }
    run.sse_trace.push_back(sse);
    run.final_sse = sse;
    return run;
}

void append_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void append_double(std::string& buf, double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof(bits));
    append_u64(buf, bits);
}

bool centroids_pairwise_distinct(const std::vector<Point>& centroids) {
    for (std::size_t i = 0; i < centroids.size(); ++i)
        for (std::size_t j = i + 1; j < centroids.size(); ++j)
            if (squared_distance(centroids[i], centroids[j]) == 0.0) return false;
    return true;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (unsigned char byte : data) {
        hash ^= byte;
        hash *= 0x100000001B3ull;
    }
    return hash;
}

std::string canonical_bytes(const Codebook& cb) {
    std::string buf = "semgtok-codebook-v1";
    append_u64(buf, static_cast<std::uint64_t>(cb.k));
    for (const auto& c : cb.centroids)
        for (double v : c) append_double(buf, v);
    for (std::size_t d = 0; d < kFeatureCount; ++d) {
        append_double(buf, cb.normalizer.mean[d]);
        append_double(buf, cb.normalizer.stddev[d]);
        buf.push_back(cb.normalizer.zero_variance[d] ? 1 : 0);
    }
    for (int r : cb.activation_rank) append_u64(buf, static_cast<std::uint64_t>(r));
    append_double(buf, cb.training_sse);
    append_u64(buf, cb.rng_seed);
    append_u64(buf, static_cast<std::uint64_t>(cb.restarts));
    append_u64(buf, static_cast<std::uint64_t>(cb.iterations_used));
    const auto& cfg = cb.config;
    append_double(buf, cfg.band_low_hz);
    append_double(buf, cfg.band_high_hz);
    append_u64(buf, static_cast<std::uint64_t>(cfg.filter_order));
    append_double(buf, cfg.window_ms);
    append_double(buf, cfg.stride_ms);
    append_double(buf, cfg.zc_threshold);
    append_double(buf, cfg.ssc_threshold);
    append_double(buf, cfg.wamp_threshold);
    append_u64(buf, static_cast<std::uint64_t>(cfg.ar_order));
    append_u64(buf, static_cast<std::uint64_t>(cfg.fft_size));
    append_double(buf, cfg.psr_halfband_hz);
    append_u64(buf, static_cast<std::uint64_t>(cfg.k_clusters));
    append_u64(buf, static_cast<std::uint64_t>(cfg.kmeans_restarts));
    append_u64(buf, static_cast<std::uint64_t>(cfg.kmeans_max_iter));
    append_double(buf, cfg.kmeans_rel_tol);
    append_u64(buf, cfg.rng_seed);
    return buf;
}

} // namespace

std::array<double, kFeatureCount> Codebook::denormalized_centroid(int id) const {
    std::array<double, kFeatureCount> out{};
    const auto& c = centroids[static_cast<std::size_t>(id)];
    for (std::size_t d = 0; d < kFeatureCount; ++d)
        out[d] = normalizer.mean[d] + normalizer.stddev[d] * c[d];
    return out;
}

std::string Codebook::fingerprint() const {
    const std::uint64_t hash = fnv1a64(canonical_bytes(*this));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf, 16);
}

Codebook train_codebook(const std::vector<FeatureVector>& features,
                        const PipelineConfig& cfg,
                        TrainingDiagnostics* diagnostics) {
    cfg.validate();
    const int k = cfg.k_clusters;
    if (features.size() < static_cast<std::size_t>(k))
        raise(ErrorCode::TooFewSamples,
              "need at least " + std::to_string(k) + " feature vectors, got " +
                  std::to_string(features.size()));
    for (const auto& f : features)
        for (double v : f.values)
            if (!std::isfinite(v)) raise(ErrorCode::NonFiniteFeature, "non-finite feature");

    const Normalizer nz = fit_normalizer(features);
    std::vector<Point> points(features.size());
    for (std::size_t i = 0; i < features.size(); ++i)
        points[i] = apply_normalizer(nz, features[i]).values;

    {
        std::set<Point> distinct(points.begin(), points.end());
        if (distinct.size() < static_cast<std::size_t>(k))
            raise(ErrorCode::TooFewSamples,
                  "only " + std::to_string(distinct.size()) +
                      " distinct feature vectors for K = " + std::to_string(k));
    }

    LloydRun best;
    int best_restart = -1;
    if (diagnostics) diagnostics->sse_per_iteration.clear();
    for (int r = 0; r < cfg.kmeans_restarts; ++r) {
        LloydRun run = run_lloyd(points, k, cfg.rng_seed + static_cast<std::uint64_t>(r),
                                 cfg.kmeans_max_iter, cfg.kmeans_rel_tol);
        if (diagnostics) diagnostics->sse_per_iteration.push_back(run.sse_trace);
        if (best_restart < 0 || run.final_sse < best.final_sse) {
            best = std::move(run);
            best_restart = r;
        }
    }

    if (!centroids_pairwise_distinct(best.centroids))
        raise(ErrorCode::TooFewSamples,
              "training converged to duplicate centroids; reduce K");

    Codebook cb;
    cb.k = k;
    cb.centroids = std::move(best.centroids);
    cb.normalizer = nz;
    cb.activation_rank.resize(static_cast<std::size_t>(k));
    std::iota(cb.activation_rank.begin(), cb.activation_rank.end(), 0);
    cb.training_sse = best.final_sse;
    cb.rng_seed = cfg.rng_seed;
    cb.restarts = cfg.kmeans_restarts;
    cb.iterations_used = best.iterations;
    cb.config = cfg;
    cb = order_tokens(std::move(cb));

    if (diagnostics) {
        diagnostics->best_restart = best_restart;
        // map raw cluster indices through the ordering permutation
        std::vector<int> old_to_new(static_cast<std::size_t>(k));
        for (int rank = 0; rank < k; ++rank)
            old_to_new[static_cast<std::size_t>(cb.activation_rank[static_cast<std::size_t>(rank)])] = rank;
        diagnostics->final_assignments.resize(best.assignments.size());
        for (std::size_t i = 0; i < best.assignments.size(); ++i)
            diagnostics->final_assignments[i] =
                old_to_new[static_cast<std::size_t>(best.assignments[i])];
    }
    return cb;
}

Codebook order_tokens(Codebook cb) {
    const int k = cb.k;
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::array<double, kFeatureCount>> denorm(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) denorm[static_cast<std::size_t>(c)] = cb.denormalized_centroid(c);

    std::stable_sort(perm.begin(), perm.end(), [&](int lhs, int rhs) {
        const auto& a = denorm[static_cast<std::size_t>(lhs)];
        const auto& b = denorm[static_cast<std::size_t>(rhs)];
        if (a[kRms] != b[kRms]) return a[kRms] > b[kRms];
        if (a[kMav] != b[kMav]) return a[kMav] > b[kMav];
        return lhs < rhs;
    });

    std::vector<std::array<double, kFeatureCount>> ordered(static_cast<std::size_t>(k));
    for (int rank = 0; rank < k; ++rank)
        ordered[static_cast<std::size_t>(rank)] =
            cb.centroids[static_cast<std::size_t>(perm[static_cast<std::size_t>(rank)])];
    cb.centroids = std::move(ordered);
    cb.activation_rank = std::move(perm);
    return cb;
}

int assign_token(const FeatureVector& f, const Codebook& cb) {
    for (double v : f.values)
        if (!std::isfinite(v)) raise(ErrorCode::NonFiniteFeature, "non-finite feature");
    const auto normalized = apply_normalizer(cb.normalizer, f);
    return nearest_centroid(normalized.values, cb.centroids);
}

std::vector<TokenSequence> tokenize_recording(const Recording& rec,
                                              const Codebook& cb,
                                              const PipelineConfig& cfg) {
    if (!cfg.feature_compatible_with(cb.config))
        raise(ErrorCode::ConfigMismatch,
              "pipeline config differs from the codebook's training config");
    const Recording filtered = bandpass_filter(rec, cfg);
    const std::string fp = cb.fingerprint();

    std::vector<TokenSequence> sequences;
    sequences.reserve(rec.channel_count);
    for (std::size_t c = 0; c < rec.channel_count; ++c) {
        const auto segments = segment_channel(filtered, c, cfg);
        TokenSequence seq;
        seq.channel_index = c;
        seq.codebook_fingerprint = fp;
        seq.tokens.reserve(segments.size());
        for (const auto& seg : segments)
            seq.tokens.push_back(
                assign_token(extract_feature_vector(seg, cfg, rec.sample_rate_hz), cb));
        sequences.push_back(std::move(seq));
    }
    return sequences;
}

void save_codebook(const Codebook& cb, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["format_version"] = 1;
    doc["k"] = cb.k;
    doc["centroids"] = cb.centroids;
    doc["normalizer"] = {
        {"mean", cb.normalizer.mean},
        {"stddev", cb.normalizer.stddev},
        {"zero_variance", cb.normalizer.zero_variance},
    };
    doc["activation_rank"] = cb.activation_rank;
    doc["training_sse"] = cb.training_sse;
    doc["rng_seed"] = cb.rng_seed;
    doc["restarts"] = cb.restarts;
    doc["iterations_used"] = cb.iterations_used;
    const auto& cfg = cb.config;
    doc["config"] = {
        {"band_low_hz", cfg.band_low_hz},
        {"band_high_hz", cfg.band_high_hz},
        {"filter_order", cfg.filter_order},
        {"window_ms", cfg.window_ms},
        {"stride_ms", cfg.stride_ms},
        {"zc_threshold", cfg.zc_threshold},
        {"ssc_threshold", cfg.ssc_threshold},
        {"wamp_threshold", cfg.wamp_threshold},
        {"ar_order", cfg.ar_order},
        {"fft_size", cfg.fft_size},
        {"psr_halfband_hz", cfg.psr_halfband_hz},
        {"k_clusters", cfg.k_clusters},
        {"kmeans_restarts", cfg.kmeans_restarts},
        {"kmeans_max_iter", cfg.kmeans_max_iter},
        {"kmeans_rel_tol", cfg.kmeans_rel_tol},
        {"rng_seed", cfg.rng_seed},
    };
    doc["content_hash"] = cb.fingerprint();

    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write: " + path.string());
    out << doc.dump(2) << '\n';
}

Codebook load_codebook(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::UnreadableFile, "cannot open: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::CorruptCodebook, path.string() + ": " + e.what());
    }

    Codebook cb;
    try {
        const int version = doc.at("format_version").get<int>();
        if (version != 1)
            raise(ErrorCode::VersionMismatch,
                  "unsupported codebook format_version " + std::to_string(version));
        cb.k = doc.at("k").get<int>();
        cb.centroids = doc.at("centroids").get<std::vector<std::array<double, kFeatureCount>>>();
        const auto& nz = doc.at("normalizer");
        cb.normalizer.mean = nz.at("mean").get<std::array<double, kFeatureCount>>();
        cb.normalizer.stddev = nz.at("stddev").get<std::array<double, kFeatureCount>>();
        cb.normalizer.zero_variance = nz.at("zero_variance").get<std::array<bool, kFeatureCount>>();
        cb.activation_rank = doc.at("activation_rank").get<std::vector<int>>();
        cb.training_sse = doc.at("training_sse").get<double>();
        cb.rng_seed = doc.at("rng_seed").get<std::uint64_t>();
        cb.restarts = doc.at("restarts").get<int>();
        cb.iterations_used = doc.at("iterations_used").get<int>();
        const auto& cfg = doc.at("config");
        cb.config.band_low_hz = cfg.at("band_low_hz").get<double>();
        cb.config.band_high_hz = cfg.at("band_high_hz").get<double>();
        cb.config.filter_order = cfg.at("filter_order").get<int>();
        cb.config.window_ms = cfg.at("window_ms").get<double>();
        cb.config.stride_ms = cfg.at("stride_ms").get<double>();
        cb.config.zc_threshold = cfg.at("zc_threshold").get<double>();
        cb.config.ssc_threshold = cfg.at("ssc_threshold").get<double>();
        cb.config.wamp_threshold = cfg.at("wamp_threshold").get<double>();
        cb.config.ar_order = cfg.at("ar_order").get<int>();
        cb.config.fft_size = cfg.at("fft_size").get<int>();
        cb.config.psr_halfband_hz = cfg.at("psr_halfband_hz").get<double>();
        cb.config.k_clusters = cfg.at("k_clusters").get<int>();
        cb.config.kmeans_restarts = cfg.at("kmeans_restarts").get<int>();
        cb.config.kmeans_max_iter = cfg.at("kmeans_max_iter").get<int>();
        cb.config.kmeans_rel_tol = cfg.at("kmeans_rel_tol").get<double>();
        cb.config.rng_seed = cfg.at("rng_seed").get<std::uint64_t>();

        const std::string stored_hash = doc.at("content_hash").get<std::string>();
        if (stored_hash != cb.fingerprint())
            raise(ErrorCode::CorruptCodebook, path.string() + ": content hash mismatch");
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::CorruptCodebook, path.string() + ": " + e.what());
    }

    if (cb.k < 2 || cb.k > 26 ||
        cb.centroids.size() != static_cast<std::size_t>(cb.k) ||
        cb.activation_rank.size() != static_cast<std::size_t>(cb.k))
        raise(ErrorCode::CorruptCodebook, path.string() + ": inconsistent shapes");
    if (!centroids_pairwise_distinct(cb.centroids))
        raise(ErrorCode::CorruptCodebook, path.string() + ": duplicate centroids");
    return cb;
}

void write_token_sequences_csv(const std::filesystem::path& path,
                               const std::vector<TokenSequence>& sequences,
                               const Codebook& cb) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write: " + path.string());
    out << "channel,segment_index,token_id,token_letter\n";
    for (const auto& seq : sequences)
        for (std::size_t i = 0; i < seq.tokens.size(); ++i)
            out << seq.channel_index << ',' << i << ',' << seq.tokens[i] << ','
                << cb.token_letter(seq.tokens[i]) << '\n';
}

std::vector<TokenSequence> read_token_sequences_csv(const std::filesystem::path& path,
                                                    const Codebook& cb) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::UnreadableFile, "cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line))
        raise(ErrorCode::EmptySequence, path.string() + " is empty");

    std::map<std::size_t, std::vector<std::pair<std::size_t, int>>> by_channel;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = detail::trim(line);
        if (text.empty()) continue;
        auto cells = detail::split(text, ',');
        if (cells.size() < 3)
            raise(ErrorCode::MalformedRow,
                  path.string() + " line " + std::to_string(line_no));
        auto channel = detail::parse_int(cells[0]);
        auto index = detail::parse_int(cells[1]);
        auto token = detail::parse_int(cells[2]);
        if (!channel || !index || !token)
            raise(ErrorCode::MalformedRow,
                  path.string() + " line " + std::to_string(line_no));
        if (*token < 0 || *token >= cb.k)
            raise(ErrorCode::LabelOutOfRange,
                  path.string() + " line " + std::to_string(line_no) +
                      ": token id out of range");
        by_channel[static_cast<std::size_t>(*channel)].emplace_back(
            static_cast<std::size_t>(*index), static_cast<int>(*token));
    }
    if (by_channel.empty())
        raise(ErrorCode::EmptySequence, path.string() + " has no token rows");

    const std::string fp = cb.fingerprint();
    std::vector<TokenSequence> sequences;
    for (auto& [channel, entries] : by_channel) {
        std::sort(entries.begin(), entries.end());
        TokenSequence seq;
        seq.channel_index = channel;
        seq.codebook_fingerprint = fp;
        seq.tokens.reserve(entries.size());
        for (const auto& [index, token] : entries) seq.tokens.push_back(token);
        sequences.push_back(std::move(seq));
    }
    return sequences;
}

} // namespace semgtok
