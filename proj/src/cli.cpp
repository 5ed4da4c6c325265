// SPDX-License-Identifier: Apache-2.0
#include "semgtok/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>

#include <CLI11.hpp>

#include "semgtok/codebook.hpp"
#include "semgtok/consistency.hpp"
#include "semgtok/detail/text.hpp"
#include "semgtok/error.hpp"
#include "semgtok/features.hpp"
#include "semgtok/io.hpp"
#include "semgtok/quality.hpp"
#include "semgtok/selection.hpp"
#include "semgtok/synth.hpp"

namespace semgtok {

namespace {

namespace fs = std::filesystem;

struct ManifestEntry {
    fs::path path;
    std::string raw_path; // as written in the manifest
    RecordingFormat format = RecordingFormat::Csv;
    double sample_rate_hz = 0.0;
    std::string label;   // optional action label
    std::string subject; // optional subject id
    std::vector<std::string> channels; // optional channel subset
};

// Manifest CSV: header row naming at least path, format and sample_rate_hz;
// label, subject and channels (semicolon-separated labels) are optional.
// Relative recording paths resolve against the manifest's directory.
std::vector<ManifestEntry> load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::UnreadableFile, "cannot open manifest: " + path.string());
    std::string line;
    if (!std::getline(in, line))
        raise(ErrorCode::EmptyRecording, path.string() + " is empty");

    std::map<std::string, std::size_t> columns;
    {
        const auto cells = detail::split(detail::trim(line), ',');
        for (std::size_t i = 0; i < cells.size(); ++i)
            columns[std::string(detail::trim(cells[i]))] = i;
    }
    for (const char* required : {"path", "format", "sample_rate_hz"})
        if (!columns.count(required))
            raise(ErrorCode::MalformedRow,
                  path.string() + ": manifest header lacks '" + required + "'");

    const fs::path base = path.parent_path();
    std::vector<ManifestEntry> entries;
    std::set<std::string> seen_paths;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim(line);
        if (text.empty()) continue;
        const auto cells = detail::split(text, ',');
        const auto cell = [&](const char* name) -> std::string {
            auto it = columns.find(name);
            if (it == columns.end() || it->second >= cells.size()) return {};
            return std::string(detail::trim(cells[it->second]));
        };

        ManifestEntry entry;
        const std::string rel = cell("path");
        if (rel.empty())
            raise(ErrorCode::MalformedRow,
                  path.string() + " line " + std::to_string(line_no) + ": empty path");
        if (!seen_paths.insert(rel).second)
            raise(ErrorCode::MalformedRow,
                  path.string() + " line " + std::to_string(line_no) +
                      ": duplicate path " + rel);
        entry.raw_path = rel;
        fs::path rec_path(rel);
        entry.path = rec_path.is_absolute() ? rec_path : base / rec_path;
        entry.format = parse_recording_format(cell("format"));
        const auto rate = detail::parse_double(cell("sample_rate_hz"));
        if (!rate || !(*rate > 0.0))
            raise(ErrorCode::MalformedRow,
                  path.string() + " line " + std::to_string(line_no) +
                      ": bad sample_rate_hz");
        entry.sample_rate_hz = *rate;
        entry.label = cell("label");
        entry.subject = cell("subject");
        const std::string channels = cell("channels");
        if (!channels.empty())
            for (auto part : detail::split(channels, ';'))
                if (!detail::trim(part).empty())
                    entry.channels.emplace_back(detail::trim(part));
        entries.push_back(std::move(entry));
    }
    if (entries.empty())
        raise(ErrorCode::EmptyRecording, path.string() + " lists no recordings");
    return entries;
}

Recording load_entry(const ManifestEntry& entry) {
    Recording rec = load_recording(entry.path, entry.format, entry.sample_rate_hz);
    if (!entry.channels.empty()) rec = select_channels(rec, entry.channels);
    return rec;
}

// Exclusive lock on an output directory; guards against concurrent writers.
class DirectoryLock {
public:
    explicit DirectoryLock(const fs::path& dir) : lock_path_(dir / ".lock") {
        std::FILE* f = std::fopen(lock_path_.string().c_str(), "wx");
        if (!f)
            raise(ErrorCode::IoError,
                  "output directory is locked (remove " + lock_path_.string() +
                      " if stale)");
        std::fclose(f);
    }
    ~DirectoryLock() {
        std::error_code ec;
        fs::remove(lock_path_, ec);
    }
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    fs::path lock_path_;
};

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", fraction * 100.0);
    return buf;
}

// --config falls back to the SEMGTOK_CONFIG environment variable.
PipelineConfig config_from(const std::string& flag) {
    std::string path = flag;
    if (path.empty())
        if (const char* env = std::getenv("SEMGTOK_CONFIG")) path = env;
    PipelineConfig cfg;
    if (!path.empty()) cfg = load_pipeline_config(path);
    cfg.validate();
    return cfg;
}

struct CommonRecordingFlags {
    std::string format = "csv";
    double rate = 0.0;
    std::vector<std::string> labels;
};

void add_recording_flags(CLI::App* cmd, CommonRecordingFlags& flags) {
    cmd->add_option("--format", flags.format, "Recording format: csv or raw_f32le")
        ->check(CLI::IsMember({"csv", "raw_f32le", "raw"}));
    cmd->add_option("--rate", flags.rate, "Sample rate in Hz")->required();
    cmd->add_option("--labels", flags.labels,
                    "Channel labels (raw_f32le needs them to infer the channel count)");
}

Recording load_with_flags(const std::string& path, const CommonRecordingFlags& flags) {
    return load_recording(path, parse_recording_format(flags.format), flags.rate,
                          flags.labels);
}

int run_train(const std::string& manifest_path, const std::string& config_path,
              const std::string& out_path, std::optional<int> k_override,
              std::optional<std::uint64_t> seed_override, std::ostream& out) {
    PipelineConfig cfg = config_from(config_path);
    if (k_override) cfg.k_clusters = *k_override;
    if (seed_override) cfg.rng_seed = *seed_override;
    cfg.validate();

    std::vector<FeatureVector> features;
    for (const auto& entry : load_manifest(manifest_path)) {
        const Recording rec = load_entry(entry);
        auto rf = extract_recording_features(rec, cfg);
        features.insert(features.end(), rf.features.begin(), rf.features.end());
    }

    const Codebook cb = train_codebook(features, cfg);
    save_codebook(cb, out_path);
    out << "k=" << cb.k << " sse=" << detail::format_double(cb.training_sse)
        << " iterations=" << cb.iterations_used << " features=" << features.size()
        << " codebook=" << out_path << '\n';
    return 0;
}

int run_tokenize(const std::string& codebook_path, const std::string& input_path,
                 const CommonRecordingFlags& flags, const std::string& out_path,
                 const std::string& features_out, std::ostream& out) {
    const Codebook cb = load_codebook(codebook_path);
    const Recording rec = load_with_flags(input_path, flags);
    const auto sequences = tokenize_recording(rec, cb, cb.config);
    write_token_sequences_csv(out_path, sequences, cb);

    if (!features_out.empty()) {
        const auto rf = extract_recording_features(rec, cb.config);
        write_feature_matrix_csv(features_out, rf.segments, rf.features);
    }

    const std::size_t per_channel = sequences.front().tokens.size();
    const double reduction =
        1.0 - static_cast<double>(per_channel) / static_cast<double>(rec.sample_count);
    out << "channels=" << rec.channel_count << " segments_per_channel=" << per_channel
        << " samples=" << rec.sample_count
        << " dimension_reduction=" << detail::format_double(reduction)
        << " tokens=" << out_path << '\n';
    return 0;
}

int run_select_k(const std::string& manifest_path, int k_min, int k_max, int folds,
                 const std::string& reference_path, const std::string& config_path,
                 const std::string& out_path, std::string summary_path,
                 std::ostream& out, std::ostream& err) {
    if (k_min < 2 || k_max < k_min || folds < 2) {
        err << "error: Usage: need 2 <= kmin <= kmax and folds >= 2\n";
        return 1;
    }
    PipelineConfig cfg = config_from(config_path);

    const auto entries = load_manifest(manifest_path);

    // explicit reference labels override manifest action labels
    std::map<std::string, std::string> reference_overrides;
    if (!reference_path.empty()) {
        std::ifstream in(reference_path);
        if (!in)
            raise(ErrorCode::UnreadableFile, "cannot open reference: " + reference_path);
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            const auto text = detail::trim(line);
            if (text.empty()) continue;
            const auto cells = detail::split(text, ',');
            if (first && cells.size() >= 2 && detail::trim(cells[0]) == "path") {
                first = false;
                continue;
            }
            first = false;
            if (cells.size() < 2)
                raise(ErrorCode::MalformedRow, reference_path + ": need path,label rows");
            reference_overrides[std::string(detail::trim(cells[0]))] =
                std::string(detail::trim(cells[1]));
        }
    }

    // fold assignment: subject-wise when subjects are present, else per
    // recording, round-robin over the sorted group keys
    std::vector<std::string> group_of_entry(entries.size());
    std::set<std::string> groups;
    const bool by_subject =
        std::any_of(entries.begin(), entries.end(),
                    [](const ManifestEntry& e) { return !e.subject.empty(); });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        group_of_entry[i] = by_subject ? entries[i].subject : entries[i].path.string();
        if (by_subject && entries[i].subject.empty())
            raise(ErrorCode::MalformedRow,
                  "manifest mixes rows with and without subject ids");
        groups.insert(group_of_entry[i]);
    }
    if (static_cast<int>(groups.size()) < folds) {
        err << "error: Usage: " << folds << " folds but only " << groups.size()
            << " distinct " << (by_subject ? "subjects" : "recordings") << '\n';
        return 1;
    }
    std::map<std::string, int> fold_of_group;
    int next_fold = 0;
    for (const auto& group : groups) {
        fold_of_group[group] = next_fold;
        next_fold = (next_fold + 1) % folds;
    }

    // label ids from sorted unique label strings
    std::set<std::string> label_names;
    bool all_labelled = true;
    const auto label_of = [&](const ManifestEntry& e) -> std::string {
        for (const auto& key : {e.raw_path, e.path.filename().string(), e.path.string()}) {
            const auto it = reference_overrides.find(key);
            if (it != reference_overrides.end()) return it->second;
        }
        return e.label;
    };
    for (const auto& entry : entries) {
        const auto label = label_of(entry);
        if (label.empty()) all_labelled = false;
        else label_names.insert(label);
    }
    if (!reference_path.empty() && !all_labelled)
        raise(ErrorCode::MissingReference,
              "reference labels do not cover every manifest recording");
    const bool with_pnmi = all_labelled && !label_names.empty();
    std::map<std::string, int> label_ids;
    int next_label = 0;
    for (const auto& name : label_names) label_ids[name] = next_label++;

    std::vector<std::vector<FeatureVector>> features_by_fold(static_cast<std::size_t>(folds));
    std::vector<std::vector<int>> labels_by_fold(static_cast<std::size_t>(folds));
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const Recording rec = load_entry(entries[i]);
        auto rf = extract_recording_features(rec, cfg);
        const auto fold = static_cast<std::size_t>(fold_of_group[group_of_entry[i]]);
        if (with_pnmi) {
            const int label = label_ids[label_of(entries[i])];
            labels_by_fold[fold].insert(labels_by_fold[fold].end(), rf.features.size(), label);
        }
        features_by_fold[fold].insert(features_by_fold[fold].end(),
                                      rf.features.begin(), rf.features.end());
    }

    const KSweepReport report =
        sweep_k(features_by_fold, with_pnmi ? labels_by_fold : std::vector<std::vector<int>>{},
                k_min, k_max, cfg);
    write_sweep_csv(report, out_path);
    if (summary_path.empty()) {
        fs::path p(out_path);
        summary_path = (p.parent_path() / (p.stem().string() + "_summary.csv")).string();
    }
    write_sweep_summary_csv(report, summary_path);
    out << "k_range=[" << k_min << "," << k_max << "] folds=" << folds
        << " pnmi=" << (with_pnmi ? "yes" : "no") << " sweep=" << out_path
        << " summary=" << summary_path << '\n';
    return 0;
}

int run_consistency(const std::string& train_manifest, const std::string& test_manifest,
                    const std::string& config_path, const std::string& out_dir,
                    std::ostream& out) {
    PipelineConfig cfg = config_from(config_path);

    const auto collect = [&](const std::string& manifest) {
        std::vector<FeatureVector> features;
        for (const auto& entry : load_manifest(manifest)) {
            const Recording rec = load_entry(entry);
            auto rf = extract_recording_features(rec, cfg);
            features.insert(features.end(), rf.features.begin(), rf.features.end());
        }
        return features;
    };
    const auto train_features = collect(train_manifest);
    const auto test_features = collect(test_manifest);

    fs::create_directories(out_dir);
    DirectoryLock lock{fs::path(out_dir)};
    const auto report = run_consistency_experiment(train_features, test_features, cfg);
    write_confusion_csv(report, fs::path(out_dir) / "confusion.csv");
    write_consistency_summary_csv(report, fs::path(out_dir) / "summary.csv");
    save_pipeline_config(cfg, fs::path(out_dir) / "config.ini");
    out << "overlap=" << percent(report.overlap_rate)
        << " kappa=" << detail::format_double(report.kappa)
        << " tolerant=" << percent(report.tolerant_agreement) << " out=" << out_dir
        << '\n';
    return 0;
}

int run_score(const std::string& codebook_path, const std::string& standard_path,
              const std::string& candidate_path, const CommonRecordingFlags& flags,
              const std::vector<std::string>& channels, const std::string& out_path,
              std::ostream& out) {
    const Codebook cb = load_codebook(codebook_path);
    Recording standard = load_with_flags(standard_path, flags);
    Recording candidate = load_with_flags(candidate_path, flags);
    if (!channels.empty()) {
        standard = select_channels(standard, channels);
        candidate = select_channels(candidate, channels);
    }

    const auto matrix_of = [&](const Recording& rec) {
        return encode_action(tokenize_recording(rec, cb, cb.config), cb,
                             rec.channel_labels);
    };
    const auto report = similarity_score(matrix_of(standard), matrix_of(candidate), cb.k);
    if (!out_path.empty())
        write_similarity_csv(report, standard.channel_labels, out_path);
    out << "dtw_distance=" << detail::format_double(report.dtw_distance)
        << " path_length=" << report.path_length
        << " similarity=" << percent(report.similarity_score) << '\n';
    return 0;
}

int run_stats(const std::string& codebook_path, const std::string& input_path,
              const CommonRecordingFlags& flags, const std::string& out_path,
              std::ostream& out) {
    const Codebook cb = load_codebook(codebook_path);
    const Recording rec = load_with_flags(input_path, flags);
    const auto sequences = tokenize_recording(rec, cb, cb.config);
    std::vector<TokenStatistics> per_channel;
    per_channel.reserve(sequences.size());
    for (const auto& seq : sequences) per_channel.push_back(token_statistics(seq, cb.k));
    write_token_statistics_csv(per_channel, rec.channel_labels, cb.k, out_path);
    out << "channels=" << sequences.size() << " stats=" << out_path << '\n';
    return 0;
}

int run_report(const std::string& codebook_path, const std::string& tokens_dir,
               const std::string& out_dir, std::ostream& out) {
    const Codebook cb = load_codebook(codebook_path);
    fs::create_directories(out_dir);
    DirectoryLock lock{fs::path(out_dir)};
    save_pipeline_config(cb.config, fs::path(out_dir) / "config.ini");

    {
        std::ofstream file(fs::path(out_dir) / "centroid_features.csv");
        if (!file) raise(ErrorCode::IoError, "cannot write centroid_features.csv");
        file << "token,letter";
        for (auto name : kFeatureNames) file << ',' << name;
        file << '\n';
        for (int id = 0; id < cb.k; ++id) {
            const auto centroid = cb.denormalized_centroid(id);
            file << id << ',' << cb.token_letter(id);
            for (double v : centroid) file << ',' << detail::format_double(v);
            file << '\n';
        }
    }
    {
        const auto distances = report_centroid_distances(cb);
        std::ofstream file(fs::path(out_dir) / "centroid_distances.csv");
        if (!file) raise(ErrorCode::IoError, "cannot write centroid_distances.csv");
        file << "token";
        for (int id = 0; id < cb.k; ++id) file << ',' << cb.token_letter(id);
        file << '\n';
        for (int i = 0; i < cb.k; ++i) {
            file << cb.token_letter(i);
            for (int j = 0; j < cb.k; ++j)
                file << ','
                     << detail::format_double(
                            distances[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            file << '\n';
        }
    }

    if (!tokens_dir.empty()) {
        std::vector<fs::path> files;
        for (const auto& it : fs::directory_iterator(tokens_dir))
            if (it.is_regular_file() && it.path().extension() == ".csv")
                files.push_back(it.path());
        std::sort(files.begin(), files.end());
        if (files.empty())
            raise(ErrorCode::EmptySequence, tokens_dir + " has no token CSV files");
        std::vector<TokenSequence> pooled;
        for (const auto& file : files) {
            auto sequences = read_token_sequences_csv(file, cb);
            pooled.insert(pooled.end(), std::make_move_iterator(sequences.begin()),
                          std::make_move_iterator(sequences.end()));
        }
        const auto tm = transition_matrix(pooled, cb.k);
        std::ofstream file(fs::path(out_dir) / "transition_matrix.csv");
        if (!file) raise(ErrorCode::IoError, "cannot write transition_matrix.csv");
        file << "from\\to";
        for (int id = 0; id < cb.k; ++id) file << ',' << cb.token_letter(id);
        file << ",flagged_uniform\n";
        for (int i = 0; i < cb.k; ++i) {
            file << cb.token_letter(i);
            for (int j = 0; j < cb.k; ++j)
                file << ','
                     << detail::format_double(
                            tm.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            file << ',' << (tm.flagged_uniform[static_cast<std::size_t>(i)] ? 1 : 0) << '\n';
        }
    }
    out << "report=" << out_dir << '\n';
    return 0;
}

int run_synth(const std::string& profile_path, const std::string& out_path,
              const std::string& format_name, double rate, double duration_ms,
              const std::string& truth_out, std::ostream& out, std::ostream& err) {
    const ActivationProfile profile = load_profile(profile_path);
    const double fs = rate > 0.0 ? rate : profile.sample_rate_hz;
    const double duration = duration_ms > 0.0 ? duration_ms : profile.duration_ms;
    if (!(fs > 0.0) || !(duration > 0.0)) {
        err << "error: Usage: sample rate and duration must come from the profile "
               "or the --rate/--duration-ms flags\n";
        return 1;
    }
    const auto result = generate(profile, fs, duration);
    save_recording(result.recording, out_path, parse_recording_format(format_name));
    if (!truth_out.empty()) write_level_tracks_csv(result, truth_out);
    out << "channels=" << result.recording.channel_count
        << " samples=" << result.recording.sample_count << " rate=" << detail::format_double(fs)
        << " recording=" << out_path << '\n';
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete muscle-state tokenization of multichannel sEMG recordings"};
    app.name("semgtok");
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "Train a K-means codebook from a manifest");
    std::string train_manifest, train_config, train_out;
    std::optional<int> train_k;
    std::optional<std::uint64_t> train_seed;
    train->add_option("--manifest", train_manifest, "Manifest CSV of training recordings")
        ->required();
    train->add_option("--config", train_config, "Pipeline config file (key = value)");
    train->add_option("--out", train_out, "Output codebook JSON path")->required();
    train->add_option("--k", train_k, "Override k_clusters");
    train->add_option("--seed", train_seed, "Override rng_seed");

    // tokenize
    auto* tokenize = app.add_subcommand("tokenize", "Tokenize a recording with a codebook");
    std::string tok_codebook, tok_input, tok_out, tok_features_out;
    CommonRecordingFlags tok_flags;
    tokenize->add_option("--codebook", tok_codebook, "Codebook JSON path")->required();
    tokenize->add_option("--input", tok_input, "Recording path")->required();
    tokenize->add_option("--out", tok_out, "Output token CSV path")->required();
    tokenize->add_option("--features-out", tok_features_out,
                         "Also export the feature matrix CSV");
    add_recording_flags(tokenize, tok_flags);

    // select-k
    auto* select = app.add_subcommand(
        "select-k", "Cross-validated SSE/PNMI sweep over candidate K values");
    std::string sel_manifest, sel_reference, sel_config, sel_out, sel_summary;
    int sel_kmin = 2, sel_kmax = 25, sel_folds = 5;
    select->add_option("--manifest", sel_manifest, "Manifest CSV")->required();
    select->add_option("--kmin", sel_kmin, "Smallest K (>= 2)");
    select->add_option("--kmax", sel_kmax, "Largest K");
    select->add_option("--folds", sel_folds, "Cross-validation folds (>= 2)");
    select->add_option("--reference", sel_reference,
                       "Reference labels CSV (path,label); default: manifest labels");
    select->add_option("--config", sel_config, "Pipeline config file");
    select->add_option("--out", sel_out, "Per-fold sweep CSV path")->required();
    select->add_option("--summary-out", sel_summary,
                       "Summary CSV path (default: <out>_summary.csv)");

    // consistency
    auto* consistency =
        app.add_subcommand("consistency", "Inter-clustering consistency experiment");
    std::string con_train, con_test, con_config, con_out;
    consistency->add_option("--train-manifest", con_train, "Training manifest CSV")
        ->required();
    consistency->add_option("--test-manifest", con_test, "Test manifest CSV")->required();
    consistency->add_option("--config", con_config, "Pipeline config file");
    consistency->add_option("--out", con_out, "Output directory")->required();

    // score
    auto* score = app.add_subcommand(
        "score", "DTW similarity of a candidate execution against a standard");
    std::string score_codebook, score_standard, score_candidate, score_out;
    std::vector<std::string> score_channels;
    CommonRecordingFlags score_flags;
    score->add_option("--codebook", score_codebook, "Codebook JSON path")->required();
    score->add_option("--standard", score_standard, "Standard recording path")->required();
    score->add_option("--candidate", score_candidate, "Candidate recording path")
        ->required();
    score->add_option("--channels", score_channels,
                      "Channel label subset (e.g. primary muscles)")
        ->delimiter(',');
    score->add_option("--out", score_out, "Optional similarity report CSV");
    add_recording_flags(score, score_flags);

    // stats
    auto* stats = app.add_subcommand("stats", "Token statistical descriptors per channel");
    std::string stats_codebook, stats_input, stats_out;
    CommonRecordingFlags stats_flags;
    stats->add_option("--codebook", stats_codebook, "Codebook JSON path")->required();
    stats->add_option("--input", stats_input, "Recording path")->required();
    stats->add_option("--out", stats_out, "Output stats CSV path")->required();
    add_recording_flags(stats, stats_flags);

    // report
    auto* report = app.add_subcommand(
        "report", "Centroid feature table, centroid distances, transition matrix");
    std::string rep_codebook, rep_tokens, rep_out;
    report->add_option("--codebook", rep_codebook, "Codebook JSON path")->required();
    report->add_option("--tokens", rep_tokens,
                       "Directory of token CSVs for the transition matrix");
    report->add_option("--out", rep_out, "Output directory")->required();

    // synth
    auto* synth = app.add_subcommand("synth", "Generate synthetic sEMG from a profile");
    std::string syn_profile, syn_out, syn_truth, syn_format = "csv";
    double syn_rate = 0.0, syn_duration = 0.0;
    synth->add_option("--profile", syn_profile, "Activation profile file")->required();
    synth->add_option("--out", syn_out, "Output recording path")->required();
    synth->add_option("--format", syn_format, "Output format: csv or raw_f32le")
        ->check(CLI::IsMember({"csv", "raw_f32le", "raw"}));
    synth->add_option("--rate", syn_rate, "Sample rate in Hz (overrides profile)");
    synth->add_option("--duration-ms", syn_duration, "Duration in ms (overrides profile)");
    synth->add_option("--truth-out", syn_truth, "Ground-truth level track CSV");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(train))
            return run_train(train_manifest, train_config, train_out, train_k, train_seed, out);
        if (app.got_subcommand(tokenize))
            return run_tokenize(tok_codebook, tok_input, tok_flags, tok_out,
                                tok_features_out, out);
        if (app.got_subcommand(select))
            return run_select_k(sel_manifest, sel_kmin, sel_kmax, sel_folds, sel_reference,
                                sel_config, sel_out, sel_summary, out, err);
        if (app.got_subcommand(consistency))
            return run_consistency(con_train, con_test, con_config, con_out, out);
        if (app.got_subcommand(score))
            return run_score(score_codebook, score_standard, score_candidate, score_flags,
                             score_channels, score_out, out);
        if (app.got_subcommand(stats))
            return run_stats(stats_codebook, stats_input, stats_flags, stats_out, out);
        if (app.got_subcommand(report))
            return run_report(rep_codebook, rep_tokens, rep_out, out);
        if (app.got_subcommand(synth))
            return run_synth(syn_profile, syn_out, syn_format, syn_rate, syn_duration,
                             syn_truth, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: Internal: " << e.what() << '\n';
        return 3;
    }
    err << "error: Usage: no subcommand given\n";
    return 1;
}

} // namespace semgtok
