#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "qstr/error.hpp"
#include "qstr/pipeline.hpp"

namespace qstr {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json scales_to_json(const ScaleTable& scales) {
    json out = json::object();
    for (const auto& [joint, s] : scales.entries()) {
        out[std::string(joint_name(joint))] = {s.length_mult, s.width_mult};
    }
    return out;
}

ScaleTable scales_from_json(const json& j) {
    ScaleTable scales = ScaleTable::defaults();
    for (const auto& [name, value] : j.items()) {
        const auto joint = joint_from_name(name);
        if (!joint) {
            throw Error("config", "unknown joint in scales: " + name);
        }
        scales.set(*joint, {value.at(0).get<double>(), value.at(1).get<double>()});
    }
    return scales;
}

json config_to_json_value(const PipelineConfig& c) {
    return {
        {"qual",
         {{"tau_d", c.qual.tau_d},
          {"tau_p", c.qual.tau_p},
          {"min_dwell", c.qual.min_dwell},
          {"up_is_negative_y", c.qual.up_is_negative_y}}},
        {"window", {{"length", c.window_length}, {"stride", c.window_stride}}},
        {"vocab",
         {{"k", c.vocab_k},
          {"norm_mode", std::string(norm_mode_name(c.norm_mode))},
          {"kmeans_max_iter", c.kmeans.max_iter},
          {"kmeans_tol", c.kmeans.tol}}},
        {"hmm",
         {{"states", c.hmm_states},
          {"max_iter", c.hmm.max_iter},
          {"tol", c.hmm.tol},
          {"epsilon", c.hmm.epsilon},
          {"restarts", c.hmm.restarts}}},
        {"seed", c.seed},
        {"scales", scales_to_json(c.scales)},
        {"ablation",
         {{"use_direction", c.ablation.use_direction},
          {"use_dynamics", c.ablation.use_dynamics},
          {"decomposition", std::string(decomposition_name(c.ablation.decomposition))}}},
    };
}

PipelineConfig config_from_json_value(const json& doc) {
    PipelineConfig c;
    if (doc.contains("qual")) {
        const json& q = doc.at("qual");
        c.qual.tau_d = q.value("tau_d", c.qual.tau_d);
        c.qual.tau_p = q.value("tau_p", c.qual.tau_p);
        c.qual.min_dwell = q.value("min_dwell", c.qual.min_dwell);
        c.qual.up_is_negative_y = q.value("up_is_negative_y", c.qual.up_is_negative_y);
    }
    if (doc.contains("window")) {
        const json& w = doc.at("window");
        c.window_length = w.value("length", c.window_length);
        c.window_stride = w.value("stride", c.window_stride);
    }
    if (doc.contains("vocab")) {
        const json& v = doc.at("vocab");
        c.vocab_k = v.value("k", c.vocab_k);
        if (v.contains("norm_mode")) {
            c.norm_mode = norm_mode_from_name(v.at("norm_mode").get<std::string>());
        }
        c.kmeans.max_iter = v.value("kmeans_max_iter", c.kmeans.max_iter);
        c.kmeans.tol = v.value("kmeans_tol", c.kmeans.tol);
    }
    if (doc.contains("hmm")) {
        const json& h = doc.at("hmm");
        c.hmm_states = h.value("states", c.hmm_states);
        c.hmm.max_iter = h.value("max_iter", c.hmm.max_iter);
        c.hmm.tol = h.value("tol", c.hmm.tol);
        c.hmm.epsilon = h.value("epsilon", c.hmm.epsilon);
        c.hmm.restarts = h.value("restarts", c.hmm.restarts);
    }
    c.seed = doc.value("seed", c.seed);
    if (doc.contains("scales")) {
        c.scales = scales_from_json(doc.at("scales"));
    }
    if (doc.contains("ablation")) {
        const json& a = doc.at("ablation");
        c.ablation.use_direction = a.value("use_direction", c.ablation.use_direction);
        c.ablation.use_dynamics = a.value("use_dynamics", c.ablation.use_dynamics);
        if (a.contains("decomposition")) {
            c.ablation.decomposition =
                decomposition_from_name(a.at("decomposition").get<std::string>());
        }
    }

    if (!(c.qual.tau_d >= 0.0 && c.qual.tau_d < c.qual.tau_p && c.qual.tau_p <= 1.0)) {
        throw Error("config", "thresholds must satisfy 0 <= tau_d < tau_p <= 1");
    }
    if (c.qual.min_dwell < 1) throw Error("config", "min_dwell must be >= 1");
    if (c.window_length < 2) throw Error("config", "window length must be >= 2");
    if (c.window_stride < 1) throw Error("config", "window stride must be >= 1");
    if (c.vocab_k < 1) throw Error("config", "vocab k must be >= 1");
    if (c.hmm_states < 1) throw Error("config", "hmm states must be >= 1");
    return c;
}

json metrics_to_json(const Metrics& m) {
    return {{"accuracy", m.accuracy},
            {"macro_precision", m.macro_precision},
            {"macro_recall", m.macro_recall}};
}

json dictionary_metadata(const PipelineConfig& config) {
    const Featurizer featurizer(config);
    json scopes = json::array();
    for (Scope s : featurizer.scopes) scopes.push_back(std::string(scope_name(s)));
    return {{"spatial_relations", featurizer.dict.spatial_count()},
            {"size", featurizer.dict.size()},
            {"scopes", scopes},
            {"feature_length", featurizer.feature_length()}};
}

json hmm_to_json(const DiscreteHmm& m) {
    return {{"states", m.n_states}, {"symbols", m.n_symbols}, {"pi", m.pi},
            {"a", m.a},             {"b", m.b}};
}

DiscreteHmm hmm_from_json(const json& j) {
    DiscreteHmm m;
    m.n_states = j.at("states").get<int>();
    m.n_symbols = j.at("symbols").get<int>();
    m.pi = j.at("pi").get<std::vector<double>>();
    m.a = j.at("a").get<std::vector<std::vector<double>>>();
    m.b = j.at("b").get<std::vector<std::vector<double>>>();
    return m;
}

}  // namespace

PipelineConfig config_from_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw Error("config", "cannot open config file " + file.string());
    }
    json doc;
    try {
        in >> doc;
        return config_from_json_value(doc);
    } catch (const json::exception& e) {
        throw Error("config", file.string() + ": " + e.what());
    }
}

std::string config_to_json(const PipelineConfig& config) {
    return config_to_json_value(config).dump(2) + "\n";
}

std::string bundle_to_json(const ModelBundle& bundle) {
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["config"] = config_to_json_value(bundle.config);
    doc["labels"] = bundle.labels.names();
    doc["feature_length"] = bundle.feature_length;
    doc["dictionary"] = dictionary_metadata(bundle.config);

    if (bundle.codebook) {
        const Codebook& cb = *bundle.codebook;
        doc["codebook"] = {{"version", kFormatVersion},
                           {"k", cb.k},
                           {"seed", cb.seed},
                           {"norm_mode", std::string(norm_mode_name(cb.norm_mode))},
                           {"feature_length", cb.feature_length},
                           {"centroids", cb.centroids}};
    } else {
        doc["codebook"] = nullptr;
    }

    json models = json::array();
    for (std::size_t c = 0; c < bundle.models.size(); ++c) {
        json m = hmm_to_json(bundle.models[c]);
        m["label"] = bundle.labels.name(static_cast<int>(c));
        models.push_back(std::move(m));
    }
    doc["models"] = models;

    if (bundle.knn) {
        json labels = json::array();
        for (int idx : bundle.knn->labels) labels.push_back(bundle.labels.name(idx));
        doc["knn"] = {{"labels", labels}, {"features", bundle.knn->features}};
    } else {
        doc["knn"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

ModelBundle bundle_from_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw Error("bundle", "cannot open bundle file " + file.string());
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error("bundle", file.string() + ": " + e.what());
    }

    try {
        ModelBundle bundle;
        bundle.config = config_from_json_value(doc.at("config"));
        bundle.labels = LabelTable(doc.at("labels").get<std::vector<std::string>>());
        bundle.feature_length = doc.at("feature_length").get<std::size_t>();

        if (!doc.at("codebook").is_null()) {
            const json& jc = doc.at("codebook");
            Codebook cb;
            cb.k = jc.at("k").get<int>();
            cb.seed = jc.at("seed").get<std::uint64_t>();
            cb.norm_mode = norm_mode_from_name(jc.at("norm_mode").get<std::string>());
            cb.feature_length = jc.at("feature_length").get<std::size_t>();
            cb.centroids = jc.at("centroids").get<std::vector<std::vector<double>>>();
            bundle.codebook = std::move(cb);
        }
        for (const json& jm : doc.at("models")) {
            bundle.models.push_back(hmm_from_json(jm));
        }
        if (!doc.at("knn").is_null()) {
            const json& jk = doc.at("knn");
            KnnModel knn;
            for (const json& name : jk.at("labels")) {
                knn.labels.push_back(bundle.labels.index_of(name.get<std::string>()));
            }
            knn.features = jk.at("features").get<std::vector<std::vector<double>>>();
            bundle.knn = std::move(knn);
        }
        return bundle;
    } catch (const json::exception& e) {
        throw Error("bundle", file.string() + ": schema violation: " + e.what());
    }
}

std::string report_to_json(const EvaluationReport& report) {
    json repeats = json::array();
    for (const RepeatResult& r : report.repeats) {
        json folds = json::array();
        for (const FoldResult& f : r.folds) {
            json predictions = json::array();
            for (const PredictionRecord& p : f.predictions) {
                predictions.push_back({{"video", p.video_id},
                                       {"truth", report.labels[static_cast<std::size_t>(p.truth)]},
                                       {"predicted",
                                        report.labels[static_cast<std::size_t>(p.predicted)]}});
            }
            folds.push_back({{"subject", f.subject}, {"predictions", predictions}});
        }
        json jr = metrics_to_json(r.metrics);
        jr["seed"] = r.seed;
        jr["confusion"] = r.confusion;
        jr["folds"] = folds;
        repeats.push_back(std::move(jr));
    }
    const json doc = {{"format_version", kFormatVersion},
                      {"labels", report.labels},
                      {"repeats", repeats},
                      {"mean", metrics_to_json(report.mean)},
                      {"std", metrics_to_json(report.stddev)},
                      {"confusion", report.confusion}};
    return doc.dump(2) + "\n";
}

std::string confusion_to_text(const std::vector<std::string>& labels,
                              const std::vector<std::vector<long>>& confusion) {
    std::size_t name_width = sizeof("truth\\pred") - 1;
    for (const std::string& l : labels) name_width = std::max(name_width, l.size());
    std::size_t cell_width = 5;
    for (const auto& row : confusion) {
        for (long v : row) {
            cell_width = std::max(cell_width, std::to_string(v).size() + 1);
        }
    }
    for (const std::string& l : labels) cell_width = std::max(cell_width, l.size() + 1);

    std::ostringstream out;
    out << std::setw(static_cast<int>(name_width)) << "truth\\pred";
    for (const std::string& l : labels) {
        out << std::setw(static_cast<int>(cell_width)) << l;
    }
    out << "\n";
    for (std::size_t i = 0; i < confusion.size(); ++i) {
        out << std::setw(static_cast<int>(name_width)) << labels[i];
        for (long v : confusion[i]) {
            out << std::setw(static_cast<int>(cell_width)) << v;
        }
        out << "\n";
    }
    return out.str();
}

std::string features_to_json(const PipelineConfig& config,
                             const std::vector<VideoFeatures>& features) {
    json videos = json::array();
    for (const VideoFeatures& vf : features) {
        json windows = json::array();
        for (std::size_t w = 0; w < vf.windows.size(); ++w) {
            windows.push_back(
                {{"fragments", {vf.windows[w].first_fragment, vf.windows[w].last_fragment}},
                 {"frames", {vf.windows[w].frames.start, vf.windows[w].frames.end}},
                 {"counts", vf.features[w]}});
        }
        videos.push_back({{"video_id", vf.video_id},
                          {"subject_id", vf.subject_id},
                          {"label", vf.label},
                          {"windows", windows}});
    }
    const json doc = {
        {"format_version", kFormatVersion},
        {"config", config_to_json_value(config)},
        {"dictionary", dictionary_metadata(config)},
        {"column_order",
         "rows are windows in video order; columns are scope blocks in the configured scope "
         "order, each block listing the cell-graph dictionary entries in enumeration order"},
        {"videos", videos}};
    return doc.dump(2) + "\n";
}

}  // namespace qstr
