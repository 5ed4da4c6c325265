// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "semgtok/config.hpp"
#include "semgtok/features.hpp"
#include "semgtok/recording.hpp"

namespace semgtok {

// Per-channel sequence of discrete token ids in [0, K). Token id 0 is the
// highest-activation state (letter A), id K-1 the rest state.
struct TokenSequence {
    std::vector<int> tokens;
    std::size_t channel_index = 0;
    std::string codebook_fingerprint;
};

// Trained K-means codebook: K centroids in normalized feature space, the
// feature normalizer fitted on the training set, and provenance metadata.
// Centroids are stored in token order (descending activation).
struct Codebook {
    int k = 0;
    std::vector<std::array<double, kFeatureCount>> centroids;
    Normalizer normalizer;
    // Permutation applied by the ordering step: activation_rank[rank] is
    // the pre-ordering cluster index now labelled with this rank.
    std::vector<int> activation_rank;
    double training_sse = 0.0;
    std::uint64_t rng_seed = 0;
    int restarts = 0;
    int iterations_used = 0;
    PipelineConfig config;

    char token_letter(int id) const { return static_cast<char>('A' + id); }
    std::array<double, kFeatureCount> denormalized_centroid(int id) const;

    // Content hash over all stored fields (FNV-1a 64 of the canonical byte
    // layout); also used as the token-sequence provenance fingerprint.
    std::string fingerprint() const;
};

// Optional training introspection for tests and reports.
struct TrainingDiagnostics {
    // SSE after each assignment step, one trace per restart.
    std::vector<std::vector<double>> sse_per_iteration;
    int best_restart = -1;
    // Final-iteration cluster memberships (in ordered token ids).
    std::vector<int> final_assignments;
};

// Lloyd's algorithm with k-means++ seeding, `kmeans_restarts` independent
// restarts seeded seed, seed+1, ...; lowest final SSE wins (ties go to the
// earliest seed). Empty clusters are reseeded with the point farthest from
// its centroid. Centroid sums run in index order so identical inputs and
// seed give bit-identical codebooks. The result is token-ordered.
Codebook train_codebook(const std::vector<FeatureVector>& features,
                        const PipelineConfig& cfg,
                        TrainingDiagnostics* diagnostics = nullptr);

// Relabels clusters by descending denormalized centroid RMS; ties break by
// descending denormalized MAV, then original index. Idempotent.
Codebook order_tokens(Codebook cb);

// Nearest centroid in normalized space; ties go to the lowest token id.
int assign_token(const FeatureVector& f, const Codebook& cb);

// Full pipeline per channel: bandpass filter, segmentation, feature
// extraction, token assignment. `cfg` must be feature-compatible with the
// codebook's training config.
std::vector<TokenSequence> tokenize_recording(const Recording& rec,
                                              const Codebook& cb,
                                              const PipelineConfig& cfg);

// Versioned JSON document with an embedded content hash, verified on load.
void save_codebook(const Codebook& cb, const std::filesystem::path& path);
Codebook load_codebook(const std::filesystem::path& path);

// Token CSV: channel, segment_index, token_id, token_letter.
void write_token_sequences_csv(const std::filesystem::path& path,
                               const std::vector<TokenSequence>& sequences,
                               const Codebook& cb);
std::vector<TokenSequence> read_token_sequences_csv(const std::filesystem::path& path,
                                                    const Codebook& cb);

} // namespace semgtok
