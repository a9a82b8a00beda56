#include "qstr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "qstr/error.hpp"
#include "qstr/kernels.hpp"
#include "qstr/rng.hpp"

namespace qstr {

std::string_view decomposition_name(Decomposition d) {
    switch (d) {
        case Decomposition::Full: return "full";
        case Decomposition::WholeOnly: return "whole-only";
        case Decomposition::UpperOnly: return "upper-only";
        case Decomposition::LowerOnly: return "lower-only";
    }
    return "unknown";
}

Decomposition decomposition_from_name(std::string_view name) {
    if (name == "full") return Decomposition::Full;
    if (name == "whole-only") return Decomposition::WholeOnly;
    if (name == "upper-only") return Decomposition::UpperOnly;
    if (name == "lower-only") return Decomposition::LowerOnly;
    throw Error("config", "unknown decomposition: " + std::string(name));
}

std::vector<Scope> decomposition_scopes(Decomposition d) {
    switch (d) {
        case Decomposition::Full: return {Scope::Whole, Scope::Upper, Scope::Lower};
        case Decomposition::WholeOnly: return {Scope::Whole};
        case Decomposition::UpperOnly: return {Scope::Upper};
        case Decomposition::LowerOnly: return {Scope::Lower};
    }
    return {};
}

Featurizer::Featurizer(const PipelineConfig& config)
    : dict(config.ablation.use_direction ? full_spatial_alphabet() : distance_only_alphabet()),
      scopes(decomposition_scopes(config.ablation.decomposition)) {}

VideoFeatures compute_video_features(const PipelineConfig& config, const Featurizer& featurizer,
                                     const TrackedVideo& video) {
    const BodyMetrics metrics = video_body_metrics(video);

    ScopeEpisodes episodes;
    episodes.frame_count = video.frame_count();
    std::set<Scope> needed(featurizer.scopes.begin(), featurizer.scopes.end());
    needed.insert(Scope::Whole);  // fragments always come from the whole scope
    for (Scope scope : needed) {
        const auto series = relation_series(video, scope, config.qual, config.scales, metrics,
                                            config.ablation.use_direction);
        auto& bucket = episodes.by_scope[static_cast<std::size_t>(scope)];
        for (const RelationSeries& s : series) {
            const RelationSeries filtered = dwell_filter(s, config.qual);
            const auto eps = compress_episodes(filtered);
            bucket.insert(bucket.end(), eps.begin(), eps.end());
        }
    }

    const auto fragments =
        segment_fragments(episodes.for_scope(Scope::Whole), video.frame_count());

    VideoFeatures out;
    out.video_id = video.video_id;
    out.subject_id = video.subject_id;
    out.label = video.label;
    if (config.ablation.use_dynamics) {
        out.windows = sliding_windows(fragments, config.window_length, config.window_stride);
    } else {
        // one graph over the entire video
        out.windows = {Window{0, static_cast<int>(fragments.size()) - 1,
                              {0, video.frame_count() - 1}}};
    }
    out.features.reserve(out.windows.size());
    for (const Window& w : out.windows) {
        out.features.push_back(
            hierarchical_features(episodes, w, featurizer.dict, featurizer.scopes));
    }
    return out;
}

std::vector<VideoFeatures> compute_features(const PipelineConfig& config,
                                            const Dataset& dataset) {
    const Featurizer featurizer(config);
    std::vector<VideoFeatures> out;
    out.reserve(dataset.videos.size());
    for (const TrackedVideo& video : dataset.videos) {
        out.push_back(compute_video_features(config, featurizer, video));
    }
    return out;
}

namespace {

ModelBundle train_on_features(const PipelineConfig& config, const LabelTable& labels,
                              const std::vector<VideoFeatures>& features,
                              std::size_t feature_length) {
    ModelBundle bundle;
    bundle.config = config;
    bundle.labels = labels;
    bundle.feature_length = feature_length;

    std::vector<int> per_class_count(static_cast<std::size_t>(labels.size()), 0);
    for (const VideoFeatures& vf : features) {
        ++per_class_count[static_cast<std::size_t>(labels.index_of(vf.label))];
    }
    for (int c = 0; c < labels.size(); ++c) {
        if (per_class_count[static_cast<std::size_t>(c)] == 0) {
            throw Error("train", "class '" + labels.name(c) + "' has no training videos");
        }
    }

    if (!config.ablation.use_dynamics) {
        KnnModel knn;
        for (const VideoFeatures& vf : features) {
            knn.features.push_back(prepare_vector(vf.features.front(), config.norm_mode));
            knn.labels.push_back(labels.index_of(vf.label));
        }
        bundle.knn = std::move(knn);
        return bundle;
    }

    std::vector<FeatureVector> all_windows;
    for (const VideoFeatures& vf : features) {
        all_windows.insert(all_windows.end(), vf.features.begin(), vf.features.end());
    }
    const auto distinct = collect_distinct(all_windows);
    const Codebook codebook =
        kmeans_fit(distinct, config.vocab_k, rng::derive_seed({config.seed, 0x6b6d}),
                   config.norm_mode, config.kmeans);

    std::vector<std::vector<ObservationSequence>> sequences(
        static_cast<std::size_t>(labels.size()));
    for (const VideoFeatures& vf : features) {
        ObservationSequence words;
        words.reserve(vf.features.size());
        for (const FeatureVector& f : vf.features) {
            words.push_back(assign_word(f, codebook));
        }
        sequences[static_cast<std::size_t>(labels.index_of(vf.label))].push_back(
            std::move(words));
    }

    bundle.codebook = codebook;
    bundle.models.reserve(static_cast<std::size_t>(labels.size()));
    for (int c = 0; c < labels.size(); ++c) {
        bundle.models.push_back(baum_welch_fit(
            sequences[static_cast<std::size_t>(c)], config.hmm_states, config.vocab_k,
            rng::derive_seed({config.seed, 0x686d, static_cast<std::uint64_t>(c)}), config.hmm));
    }
    return bundle;
}

/// Shared classification path for a featurized video.
Prediction classify_features(const ModelBundle& bundle, const VideoFeatures& vf) {
    Prediction out;
    if (!bundle.config.ablation.use_dynamics) {
        if (!bundle.knn) {
            throw Error("predict", "bundle has no nearest-neighbor model");
        }
        const std::vector<double> u =
            prepare_vector(vf.features.front(), bundle.config.norm_mode);
        const double uu = bocg_kernel(std::span<const double>(u), std::span<const double>(u));
        out.scores.assign(static_cast<std::size_t>(bundle.labels.size()),
                          -std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < bundle.knn->features.size(); ++i) {
            const auto& v = bundle.knn->features[i];
            const double uv = bocg_kernel(std::span<const double>(u), std::span<const double>(v));
            const double vv = bocg_kernel(std::span<const double>(v), std::span<const double>(v));
            const double score = -(uu - 2.0 * uv + vv);  // negated squared kernel distance
            auto& best = out.scores[static_cast<std::size_t>(bundle.knn->labels[i])];
            best = std::max(best, score);
        }
        out.label_index = static_cast<int>(
            std::max_element(out.scores.begin(), out.scores.end()) - out.scores.begin());
        return out;
    }

    if (!bundle.codebook || bundle.models.empty()) {
        throw Error("predict", "bundle has no trained models");
    }
    out.words.reserve(vf.features.size());
    for (const FeatureVector& f : vf.features) {
        out.words.push_back(assign_word(f, *bundle.codebook));
    }
    const Classification cls = classify(bundle.models, out.words);
    out.label_index = cls.label_index;
    out.scores = cls.scores;
    return out;
}

}  // namespace

ModelBundle train_pipeline(const PipelineConfig& config, const Dataset& dataset) {
    if (dataset.videos.empty()) {
        throw Error("train", "empty dataset");
    }
    const Featurizer featurizer(config);
    const auto features = compute_features(config, dataset);
    return train_on_features(config, dataset.labels, features, featurizer.feature_length());
}

Prediction predict(const ModelBundle& bundle, const TrackedVideo& video) {
    const Featurizer featurizer(bundle.config);
    if (featurizer.feature_length() != bundle.feature_length) {
        throw Error("predict", "bundle feature length does not match its configuration");
    }
    const VideoFeatures vf = compute_video_features(bundle.config, featurizer, video);
    return classify_features(bundle, vf);
}

Metrics compute_metrics(const std::vector<std::vector<long>>& confusion) {
    const std::size_t c = confusion.size();
    long total = 0;
    long diag = 0;
    std::vector<long> row_sum(c, 0);
    std::vector<long> col_sum(c, 0);
    for (std::size_t i = 0; i < c; ++i) {
        if (confusion[i].size() != c) {
            throw Error("metrics", "confusion matrix is not square");
        }
        for (std::size_t j = 0; j < c; ++j) {
            const long v = confusion[i][j];
            if (v < 0) {
                throw Error("metrics", "negative confusion matrix entry");
            }
            total += v;
            row_sum[i] += v;
            col_sum[j] += v;
            if (i == j) diag += v;
        }
    }
    if (total == 0) {
        throw Error("metrics", "all-zero confusion matrix");
    }

    Metrics m;
    m.accuracy = static_cast<double>(diag) / static_cast<double>(total);
    double precision = 0.0;
    double recall = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
        const double d = static_cast<double>(confusion[i][i]);
        if (col_sum[i] > 0) precision += d / static_cast<double>(col_sum[i]);
        if (row_sum[i] > 0) recall += d / static_cast<double>(row_sum[i]);
    }
    m.macro_precision = precision / static_cast<double>(c);
    m.macro_recall = recall / static_cast<double>(c);
    return m;
}

EvaluationReport evaluate_loso(const PipelineConfig& config, const Dataset& dataset,
                               int repeats) {
    if (repeats < 1) {
        throw Error("evaluate", "repeats must be >= 1");
    }
    const std::vector<std::string> subjects = dataset.subjects();
    if (subjects.size() < 2) {
        throw Error("evaluate", "leave-one-subject-out needs at least 2 subjects");
    }

    const Featurizer featurizer(config);
    // Features are label- and seed-independent; compute once for all folds.
    const auto features = compute_features(config, dataset);
    const auto c = static_cast<std::size_t>(dataset.labels.size());

    EvaluationReport report;
    report.labels = dataset.labels.names();
    report.confusion.assign(c, std::vector<long>(c, 0));

    for (int r = 0; r < repeats; ++r) {
        RepeatResult repeat;
        repeat.seed = rng::derive_seed({config.seed, 0x726570, static_cast<std::uint64_t>(r)});
        repeat.confusion.assign(c, std::vector<long>(c, 0));

        for (std::size_t fold_index = 0; fold_index < subjects.size(); ++fold_index) {
            const std::string& held_out = subjects[fold_index];
            PipelineConfig fold_config = config;
            fold_config.seed = rng::derive_seed({repeat.seed, fold_index});

            std::vector<VideoFeatures> train_features;
            std::vector<const VideoFeatures*> test_features;
            for (const VideoFeatures& vf : features) {
                if (vf.subject_id == held_out) {
                    test_features.push_back(&vf);
                } else {
                    train_features.push_back(vf);
                }
            }
            const ModelBundle bundle = train_on_features(
                fold_config, dataset.labels, train_features, featurizer.feature_length());

            FoldResult fold;
            fold.subject = held_out;
            for (const VideoFeatures* vf : test_features) {
                const int predicted = classify_features(bundle, *vf).label_index;
                const int truth = dataset.labels.index_of(vf->label);
                fold.predictions.push_back({vf->video_id, truth, predicted});
                ++repeat.confusion[static_cast<std::size_t>(truth)]
                                  [static_cast<std::size_t>(predicted)];
            }
            repeat.folds.push_back(std::move(fold));
        }

        for (std::size_t i = 0; i < c; ++i) {
            for (std::size_t j = 0; j < c; ++j) {
                report.confusion[i][j] += repeat.confusion[i][j];
            }
        }
        repeat.metrics = compute_metrics(repeat.confusion);
        report.repeats.push_back(std::move(repeat));
    }

    const auto n = static_cast<double>(report.repeats.size());
    Metrics mean;
    for (const RepeatResult& rr : report.repeats) {
        mean.accuracy += rr.metrics.accuracy / n;
        mean.macro_precision += rr.metrics.macro_precision / n;
        mean.macro_recall += rr.metrics.macro_recall / n;
    }
    Metrics stddev;
    if (report.repeats.size() > 1) {
        double va = 0.0;
        double vp = 0.0;
        double vr = 0.0;
        for (const RepeatResult& rr : report.repeats) {
            va += (rr.metrics.accuracy - mean.accuracy) * (rr.metrics.accuracy - mean.accuracy);
            vp += (rr.metrics.macro_precision - mean.macro_precision) *
                  (rr.metrics.macro_precision - mean.macro_precision);
            vr += (rr.metrics.macro_recall - mean.macro_recall) *
                  (rr.metrics.macro_recall - mean.macro_recall);
        }
        stddev.accuracy = std::sqrt(va / (n - 1.0));
        stddev.macro_precision = std::sqrt(vp / (n - 1.0));
        stddev.macro_recall = std::sqrt(vr / (n - 1.0));
    }
    report.mean = mean;
    report.stddev = stddev;
    return report;
}

Dataset shuffle_labels(const Dataset& dataset, std::uint64_t seed) {
    Dataset out = dataset;
    std::vector<std::string> labels;
    labels.reserve(out.videos.size());
    for (const TrackedVideo& v : out.videos) labels.push_back(v.label);

    std::mt19937_64 gen(seed);
    for (std::size_t i = labels.size(); i > 1; --i) {
        std::swap(labels[i - 1], labels[rng::index_below(gen, i)]);
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out.videos[i].label = std::move(labels[i]);
    }
    return out;
}

}  // namespace qstr
