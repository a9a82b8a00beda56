#include "qstr/synth.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include <json.hpp>

#include "qstr/error.hpp"
#include "qstr/rng.hpp"

namespace qstr::synth {

using nlohmann::json;

const std::map<Joint, Point2D>& base_pose() {
    static const std::map<Joint, Point2D> pose = {
        {Joint::Head, {200.0, 60.0}},
        {Joint::Neck, {200.0, 95.0}},
        {Joint::Torso, {200.0, 150.0}},
        {Joint::LeftShoulder, {170.0, 100.0}},
        {Joint::RightShoulder, {230.0, 100.0}},
        {Joint::LeftElbow, {160.0, 135.0}},
        {Joint::RightElbow, {240.0, 135.0}},
        {Joint::LeftHand, {150.0, 170.0}},
        {Joint::RightHand, {250.0, 170.0}},
        {Joint::LeftHip, {185.0, 205.0}},
        {Joint::RightHip, {215.0, 205.0}},
        {Joint::LeftKnee, {182.0, 255.0}},
        {Joint::RightKnee, {218.0, 255.0}},
        {Joint::LeftFoot, {180.0, 305.0}},
        {Joint::RightFoot, {220.0, 305.0}},
    };
    return pose;
}

namespace {

struct Pose {
    std::array<Point2D, kTrackedJointCount> joints{};
    std::map<int, Point2D> objects;
};

Pose initial_pose(const Spec& spec) {
    Pose pose;
    for (const auto& [joint, p] : base_pose()) {
        pose.joints[static_cast<std::size_t>(joint)] = p;
    }
    for (const ObjectSpec& obj : spec.objects) {
        pose.objects[obj.id] = obj.start;
    }
    return pose;
}

/// Script evaluated at jitter-free, subject-0 coordinates.
std::vector<Pose> evaluate_script(const Spec& spec, const ActivityScript& script) {
    std::vector<Pose> frames;
    Pose current = initial_pose(spec);
    frames.push_back(current);
    for (const Keyframe& segment : script.segments) {
        const Pose from = current;
        for (int f = 1; f <= segment.frames; ++f) {
            const double u = static_cast<double>(f) / static_cast<double>(segment.frames);
            for (const auto& [joint, target] : segment.joint_targets) {
                const Point2D& s = from.joints[static_cast<std::size_t>(joint)];
                current.joints[static_cast<std::size_t>(joint)] = {
                    s.x + u * (target.x - s.x), s.y + u * (target.y - s.y)};
            }
            for (const auto& [id, target] : segment.object_targets) {
                const auto it = from.objects.find(id);
                if (it == from.objects.end()) {
                    throw Error("synth", "script '" + script.name + "' moves unknown object " +
                                             std::to_string(id));
                }
                const Point2D& s = it->second;
                current.objects[id] = {s.x + u * (target.x - s.x), s.y + u * (target.y - s.y)};
            }
            frames.push_back(current);
        }
    }
    return frames;
}

Point2D subject_transform(Point2D p, int subject) {
    // Body-size scaling about the rest-pose torso plus a translation; both
    // preserve every qualitative relation, so ground truth is subject 0's.
    const Point2D pivot = base_pose().at(Joint::Torso);
    const double scale = 1.0 + 0.05 * static_cast<double>(subject);
    return {pivot.x + scale * (p.x - pivot.x) + 8.0 * static_cast<double>(subject),
            pivot.y + scale * (p.y - pivot.y) + 5.0 * static_cast<double>(subject)};
}

}  // namespace

Dataset generate(const Spec& spec, std::uint64_t seed) {
    if (spec.classes.size() < 2) {
        throw Error("synth", "a synthetic spec needs at least 2 activity classes");
    }
    if (spec.subjects < 1 || spec.repetitions < 1) {
        throw Error("synth", "subjects and repetitions must be >= 1");
    }
    if (spec.jitter < 0.0) {
        throw Error("synth", "jitter must be non-negative");
    }

    Dataset dataset;
    for (std::size_t c = 0; c < spec.classes.size(); ++c) {
        const ActivityScript& script = spec.classes[c];
        const std::vector<Pose> scripted = evaluate_script(spec, script);
        if (scripted.size() < 2) {
            throw Error("synth", "class '" + script.name + "' produces fewer than 2 frames");
        }
        for (int s = 0; s < spec.subjects; ++s) {
            for (int r = 0; r < spec.repetitions; ++r) {
                std::mt19937_64 gen(rng::derive_seed({seed, static_cast<std::uint64_t>(c),
                                                      static_cast<std::uint64_t>(s),
                                                      static_cast<std::uint64_t>(r)}));
                TrackedVideo video;
                video.subject_id = "S" + std::to_string(s + 1);
                video.video_id = video.subject_id + "_" + script.name + "_r" + std::to_string(r);
                video.label = script.name;
                video.frames.reserve(scripted.size());
                const double scale = 1.0 + 0.05 * static_cast<double>(s);
                for (std::size_t t = 0; t < scripted.size(); ++t) {
                    FrameSnapshot frame;
                    frame.frame_index = static_cast<int>(t);
                    for (Joint j : tracked_joints()) {
                        Point2D p = subject_transform(
                            scripted[t].joints[static_cast<std::size_t>(j)], s);
                        p.x += rng::symmetric_double(gen, spec.jitter);
                        p.y += rng::symmetric_double(gen, spec.jitter);
                        frame.joint(j) = p;
                    }
                    for (const ObjectSpec& obj : spec.objects) {
                        Point2D p = subject_transform(scripted[t].objects.at(obj.id), s);
                        p.x += rng::symmetric_double(gen, spec.jitter);
                        p.y += rng::symmetric_double(gen, spec.jitter);
                        frame.objects[obj.id] = {p, obj.width * scale, obj.height * scale};
                    }
                    video.frames.push_back(std::move(frame));
                }
                dataset.videos.push_back(std::move(video));
            }
        }
    }
    std::sort(dataset.videos.begin(), dataset.videos.end(),
              [](const TrackedVideo& a, const TrackedVideo& b) {
                  return std::tie(a.subject_id, a.video_id) < std::tie(b.subject_id, b.video_id);
              });
    dataset.labels = LabelTable::from_videos(dataset.videos);
    return dataset;
}

Spec desk_benchmark_spec() {
    Spec spec;
    spec.name = "desk-benchmark";
    spec.subjects = 4;
    spec.repetitions = 3;
    spec.jitter = 0.5;
    spec.objects = {{0, 36.0, 36.0, {300.0, 220.0}}};

    // Right hand reaches the box, carries it up beside the head, puts it back.
    ActivityScript lift;
    lift.name = "lift_box";
    lift.segments = {
        {12, {{Joint::RightHand, {300.0, 220.0}}}, {}},
        {6, {}, {}},
        {15, {{Joint::RightHand, {300.0, 90.0}}}, {{0, {300.0, 90.0}}}},
        {6, {}, {}},
        {15, {{Joint::RightHand, {250.0, 170.0}}}, {{0, {300.0, 220.0}}}},
        {6, {}, {}},
    };

    // Right hand raised above the head, swings across twice, drops back.
    ActivityScript wave;
    wave.name = "wave_hand";
    wave.segments = {
        {12, {{Joint::RightHand, {235.0, 40.0}}}, {}},
        {10, {{Joint::RightHand, {165.0, 40.0}}}, {}},
        {10, {{Joint::RightHand, {235.0, 40.0}}}, {}},
        {10, {{Joint::RightHand, {165.0, 40.0}}}, {}},
        {12, {{Joint::RightHand, {250.0, 170.0}}}, {}},
        {6, {}, {}},
    };

    // Right foot stomps twice.
    ActivityScript stomp;
    stomp.name = "stomp_foot";
    stomp.segments = {
        {12, {{Joint::RightFoot, {235.0, 245.0}}}, {}},
        {10, {{Joint::RightFoot, {220.0, 305.0}}}, {}},
        {10, {{Joint::RightFoot, {235.0, 245.0}}}, {}},
        {10, {{Joint::RightFoot, {220.0, 305.0}}}, {}},
        {12, {}, {}},
    };

    // Both hands to the head, hold, and back down.
    ActivityScript touch;
    touch.name = "touch_head";
    touch.segments = {
        {14, {{Joint::LeftHand, {185.0, 70.0}}, {Joint::RightHand, {215.0, 70.0}}}, {}},
        {10, {}, {}},
        {14, {{Joint::LeftHand, {150.0, 170.0}}, {Joint::RightHand, {250.0, 170.0}}}, {}},
        {8, {}, {}},
    };

    spec.classes = {lift, wave, stomp, touch};
    return spec;
}

namespace {

Point2D point_from_json(const json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

Spec spec_from_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw Error("synth", "cannot open spec file " + file.string());
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error("synth", file.string() + ": " + e.what());
    }

    try {
        Spec spec;
        spec.name = doc.value("name", "synthetic");
        spec.subjects = doc.value("subjects", 2);
        spec.repetitions = doc.value("repetitions", 1);
        spec.jitter = doc.value("jitter", 0.0);
        for (const json& jo : doc.value("objects", json::array())) {
            spec.objects.push_back({jo.at("id").get<int>(), jo.at("width").get<double>(),
                                    jo.at("height").get<double>(),
                                    point_from_json(jo.at("start"))});
        }
        for (const json& jc : doc.at("classes")) {
            ActivityScript script;
            script.name = jc.at("name").get<std::string>();
            for (const json& js : jc.at("segments")) {
                Keyframe kf;
                kf.frames = js.at("frames").get<int>();
                const json joints = js.value("joints", json::object());
                for (const auto& [name, target] : joints.items()) {
                    const auto joint = joint_from_name(name);
                    if (!joint || *joint == Joint::Hip) {
                        throw Error("synth", "unknown joint in spec: " + name);
                    }
                    kf.joint_targets[*joint] = point_from_json(target);
                }
                const json objects = js.value("objects", json::object());
                for (const auto& [id, target] : objects.items()) {
                    kf.object_targets[std::stoi(id)] = point_from_json(target);
                }
                script.segments.push_back(std::move(kf));
            }
            spec.classes.push_back(std::move(script));
        }
        return spec;
    } catch (const json::exception& e) {
        throw Error("synth", file.string() + ": schema violation: " + e.what());
    }
}

std::string spec_to_json(const Spec& spec) {
    json classes = json::array();
    for (const ActivityScript& script : spec.classes) {
        json segments = json::array();
        for (const Keyframe& kf : script.segments) {
            json joints = json::object();
            for (const auto& [joint, p] : kf.joint_targets) {
                joints[std::string(joint_name(joint))] = {p.x, p.y};
            }
            json objects = json::object();
            for (const auto& [id, p] : kf.object_targets) {
                objects[std::to_string(id)] = {p.x, p.y};
            }
            segments.push_back({{"frames", kf.frames}, {"joints", joints}, {"objects", objects}});
        }
        classes.push_back({{"name", script.name}, {"segments", segments}});
    }
    json objects = json::array();
    for (const ObjectSpec& obj : spec.objects) {
        objects.push_back({{"id", obj.id},
                           {"width", obj.width},
                           {"height", obj.height},
                           {"start", {obj.start.x, obj.start.y}}});
    }
    const json doc = {{"name", spec.name},       {"subjects", spec.subjects},
                      {"repetitions", spec.repetitions}, {"jitter", spec.jitter},
                      {"objects", objects},      {"classes", classes}};
    return doc.dump(2) + "\n";
}

}  // namespace qstr::synth
