#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qstr/dataset_io.hpp"
#include "qstr/error.hpp"
#include "qstr/kernels.hpp"
#include "qstr/pipeline.hpp"
#include "qstr/synth.hpp"

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw qstr::Error("io", "cannot write " + path.string());
    }
    out << content;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) {
        std::cerr << "warning: " << w << "\n";
    }
}

qstr::Dataset load_with_warnings(const fs::path& path, const std::string& format) {
    std::vector<std::string> warnings;
    qstr::Dataset dataset =
        qstr::load_dataset(path, qstr::dataset_format_from_name(format), &warnings);
    print_warnings(warnings);
    return dataset;
}

qstr::PipelineConfig load_config(const std::string& path) {
    if (path.empty()) return {};
    return qstr::config_from_json_file(path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Activity classification over qualitative spatio-temporal graph features"};
    app.require_subcommand(1);

    // convert
    auto* convert = app.add_subcommand("convert", "Convert raw track files to canonical JSON");
    std::string convert_in;
    std::string convert_out;
    std::string convert_format = "cad120";
    convert->add_option("--in", convert_in, "Raw dataset directory")->required();
    convert->add_option("--out", convert_out, "Output directory for canonical JSON")->required();
    convert->add_option("--format", convert_format, "Raw format (cad120)")
        ->check(CLI::IsMember({"cad120"}));

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a scripted synthetic dataset");
    std::string synth_spec;
    std::string synth_builtin;
    std::uint64_t synth_seed = 1;
    std::string synth_out;
    synth->add_option("--spec", synth_spec, "Synthetic spec JSON file");
    synth->add_option("--builtin", synth_builtin, "Built-in spec name (desk)")
        ->check(CLI::IsMember({"desk"}));
    synth->add_option("--seed", synth_seed, "Generator seed");
    synth->add_option("--out", synth_out, "Output dataset directory")->required();

    // features
    auto* features = app.add_subcommand("features", "Dump per-video window feature matrices");
    std::string feat_config;
    std::string feat_dataset;
    std::string feat_format = "canonical";
    std::string feat_out;
    features->add_option("--config", feat_config, "Pipeline config JSON");
    features->add_option("--dataset", feat_dataset, "Dataset directory")->required();
    features->add_option("--format", feat_format, "Dataset format")
        ->check(CLI::IsMember({"canonical", "cad120"}));
    features->add_option("--out", feat_out, "Output JSON file")->required();

    // train
    auto* train = app.add_subcommand("train", "Train a model bundle");
    std::string train_config;
    std::string train_dataset;
    std::string train_format = "canonical";
    std::string train_out;
    train->add_option("--config", train_config, "Pipeline config JSON");
    train->add_option("--dataset", train_dataset, "Dataset directory")->required();
    train->add_option("--format", train_format, "Dataset format")
        ->check(CLI::IsMember({"canonical", "cad120"}));
    train->add_option("--out", train_out, "Output bundle JSON file")->required();

    // predict
    auto* predict = app.add_subcommand("predict", "Classify one video with a trained bundle");
    std::string predict_bundle;
    std::string predict_video;
    predict->add_option("--bundle", predict_bundle, "Bundle JSON file")->required();
    predict->add_option("--video", predict_video, "Canonical video JSON file")->required();

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Leave-one-subject-out evaluation");
    std::string eval_config;
    std::string eval_dataset;
    std::string eval_format = "canonical";
    int eval_repeats = 1;
    std::string eval_report;
    evaluate->add_option("--config", eval_config, "Pipeline config JSON");
    evaluate->add_option("--dataset", eval_dataset, "Dataset directory")->required();
    evaluate->add_option("--format", eval_format, "Dataset format")
        ->check(CLI::IsMember({"canonical", "cad120"}));
    evaluate->add_option("--repeats", eval_repeats, "Number of seeded repeats");
    evaluate->add_option("--report", eval_report, "Output report JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*convert) {
            std::vector<std::string> warnings;
            const int n = qstr::convert_cad120(convert_in, convert_out, &warnings);
            print_warnings(warnings);
            std::cout << "wrote " << n << " video file(s) to " << convert_out << "\n";
        } else if (*synth) {
            if (synth_spec.empty() == synth_builtin.empty()) {
                throw qstr::Error("synth", "give exactly one of --spec or --builtin");
            }
            const qstr::synth::Spec spec = synth_spec.empty()
                                               ? qstr::synth::desk_benchmark_spec()
                                               : qstr::synth::spec_from_json_file(synth_spec);
            const qstr::Dataset dataset = qstr::synth::generate(spec, synth_seed);
            qstr::save_dataset(dataset, synth_out);
            std::cout << "wrote " << dataset.videos.size() << " video file(s) to " << synth_out
                      << "\n";
        } else if (*features) {
            const auto config = load_config(feat_config);
            const qstr::Dataset dataset = load_with_warnings(feat_dataset, feat_format);
            const auto matrices = qstr::compute_features(config, dataset);
            write_file(feat_out, qstr::features_to_json(config, matrices));
            std::cout << "wrote features for " << matrices.size() << " video(s) to " << feat_out
                      << "\n";
        } else if (*train) {
            const auto config = load_config(train_config);
            const qstr::Dataset dataset = load_with_warnings(train_dataset, train_format);
            const qstr::ModelBundle bundle = qstr::train_pipeline(config, dataset);
            write_file(train_out, qstr::bundle_to_json(bundle));
            std::cout << "trained " << bundle.models.size() << " class model(s); bundle at "
                      << train_out << "\n";
        } else if (*predict) {
            const qstr::ModelBundle bundle = qstr::bundle_from_json_file(predict_bundle);
            qstr::TrackedVideo video = qstr::load_video(predict_video);
            std::vector<std::string> warnings;
            if (!qstr::validate_video(video, &warnings)) {
                throw qstr::Error("dataset",
                                  "video " + video.video_id + " has fewer than 2 usable frames");
            }
            print_warnings(warnings);
            const qstr::Prediction p = qstr::predict(bundle, video);
            nlohmann::json scores = nlohmann::json::object();
            for (std::size_t i = 0; i < p.scores.size(); ++i) {
                scores[bundle.labels.name(static_cast<int>(i))] = p.scores[i];
            }
            const nlohmann::json out = {{"video_id", video.video_id},
                                        {"label", bundle.labels.name(p.label_index)},
                                        {"scores", scores},
                                        {"words", p.words}};
            std::cout << out.dump(2) << "\n";
        } else if (*evaluate) {
            const auto config = load_config(eval_config);
            const qstr::Dataset dataset = load_with_warnings(eval_dataset, eval_format);
            const qstr::EvaluationReport report =
                qstr::evaluate_loso(config, dataset, eval_repeats);
            write_file(eval_report, qstr::report_to_json(report));
            std::cout << qstr::confusion_to_text(report.labels, report.confusion);
            std::cout << "accuracy " << report.mean.accuracy << " +/- " << report.stddev.accuracy
                      << ", precision " << report.mean.macro_precision << " +/- "
                      << report.stddev.macro_precision << ", recall " << report.mean.macro_recall
                      << " +/- " << report.stddev.macro_recall << " over "
                      << report.repeats.size() << " repeat(s) ["
                      << qstr::kernels::isa_name(qstr::kernels::active_isa())
                      << " kernels]\n";
            std::cout << "report written to " << eval_report << "\n";
        }
    } catch (const qstr::Error& e) {
        std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
