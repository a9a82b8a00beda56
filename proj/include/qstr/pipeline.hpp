#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qstr/graph.hpp"
#include "qstr/hmm.hpp"
#include "qstr/tracks.hpp"
#include "qstr/vocab.hpp"

namespace qstr {

enum class Decomposition : std::uint8_t {
    Full,       // whole | upper | lower blocks
    WholeOnly,  // NHD
    UpperOnly,  // UB
    LowerOnly,  // LB
};

std::string_view decomposition_name(Decomposition d);
Decomposition decomposition_from_name(std::string_view name);
std::vector<Scope> decomposition_scopes(Decomposition d);

struct AblationConfig {
    bool use_direction = true;  // false: collapse D1..D5 to undirected D (NDR)
    bool use_dynamics = true;   // false: one whole-video graph + 1-NN (NDT)
    Decomposition decomposition = Decomposition::Full;
};

struct PipelineConfig {
    QualConfig qual;
    int window_length = 4;  // fragments per window
    int window_stride = 1;  // fragments stepped between windows
    int vocab_k = 38;
    NormMode norm_mode = NormMode::Counts;
    KMeansParams kmeans;
    int hmm_states = 7;
    BaumWelchParams hmm;
    std::uint64_t seed = 1;
    ScaleTable scales = ScaleTable::defaults();
    AblationConfig ablation;
};

PipelineConfig config_from_json_file(const std::filesystem::path& file);
std::string config_to_json(const PipelineConfig& config);

/// Dictionary + scope blocks implied by a config's ablation switches.
struct Featurizer {
    explicit Featurizer(const PipelineConfig& config);

    CellGraphDictionary dict;
    std::vector<Scope> scopes;

    std::size_t feature_length() const { return scopes.size() * dict.size(); }
};

struct VideoFeatures {
    std::string video_id;
    std::string subject_id;
    std::string label;
    std::vector<Window> windows;
    std::vector<FeatureVector> features;  // one histogram row per window
};

/// relations -> dwell filter -> episodes -> fragments -> windows -> histograms.
/// With use_dynamics = false a single window spans the whole video.
VideoFeatures compute_video_features(const PipelineConfig& config, const Featurizer& featurizer,
                                     const TrackedVideo& video);
std::vector<VideoFeatures> compute_features(const PipelineConfig& config,
                                            const Dataset& dataset);

struct KnnModel {
    std::vector<std::vector<double>> features;  // prepared per norm mode
    std::vector<int> labels;                    // class index per row
};

struct ModelBundle {
    PipelineConfig config;
    LabelTable labels;
    std::size_t feature_length = 0;
    std::optional<Codebook> codebook;     // word pipeline only
    std::vector<DiscreteHmm> models;      // one per class index
    std::optional<KnnModel> knn;          // NDT variant only
};

/// Throws qstr::Error("train") when a class has no training videos, and
/// propagates the vocabulary error when k exceeds the distinct window count.
ModelBundle train_pipeline(const PipelineConfig& config, const Dataset& dataset);

struct Prediction {
    int label_index = 0;
    std::vector<double> scores;  // per-class log-likelihoods (or negated
                                 // squared kernel distances under NDT)
    std::vector<int> words;      // empty under NDT
};

Prediction predict(const ModelBundle& bundle, const TrackedVideo& video);

struct Metrics {
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
};

/// accuracy = trace/total; per-class precision = diag/column-sum and recall =
/// diag/row-sum, with empty columns/rows contributing 0; macro = unweighted
/// class mean. Throws qstr::Error("metrics") on an all-zero matrix.
Metrics compute_metrics(const std::vector<std::vector<long>>& confusion);

struct PredictionRecord {
    std::string video_id;
    int truth = 0;
    int predicted = 0;
};

struct FoldResult {
    std::string subject;
    std::vector<PredictionRecord> predictions;
};

struct RepeatResult {
    std::uint64_t seed = 0;
    std::vector<FoldResult> folds;
    std::vector<std::vector<long>> confusion;  // rows = truth
    Metrics metrics;
};

struct EvaluationReport {
    std::vector<std::string> labels;
    std::vector<RepeatResult> repeats;
    Metrics mean;
    Metrics stddev;                            // sample std over repeats
    std::vector<std::vector<long>> confusion;  // summed over repeats
};

/// Leave-one-subject-out: one fold per subject, trained on the rest, run
/// `repeats` times with derived seeds. Features are computed once and shared
/// across folds and repeats; codebooks and models are fit fold-locally on
/// training subjects only.
EvaluationReport evaluate_loso(const PipelineConfig& config, const Dataset& dataset, int repeats);

/// Deterministically permute the label multiset across videos (chance-level
/// control experiments).
Dataset shuffle_labels(const Dataset& dataset, std::uint64_t seed);

// Serialization (UTF-8 JSON documents).
std::string bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json_file(const std::filesystem::path& file);
std::string report_to_json(const EvaluationReport& report);
std::string confusion_to_text(const std::vector<std::string>& labels,
                              const std::vector<std::vector<long>>& confusion);
std::string features_to_json(const PipelineConfig& config,
                             const std::vector<VideoFeatures>& features);

}  // namespace qstr
