#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qstr/tracks.hpp"

namespace qstr::synth {

/// One keyframed move: the listed entities travel linearly from their
/// current positions to the targets over `frames` frames; everything else
/// holds still.
struct Keyframe {
    int frames = 0;
    std::map<Joint, Point2D> joint_targets;
    std::map<int, Point2D> object_targets;
};

struct ActivityScript {
    std::string name;
    std::vector<Keyframe> segments;
};

struct ObjectSpec {
    int id = 0;
    double width = 0.0;
    double height = 0.0;
    Point2D start;
};

struct Spec {
    std::string name = "synthetic";
    int subjects = 2;
    int repetitions = 1;
    double jitter = 0.0;  // per-frame uniform noise amplitude in pixels
    std::vector<ObjectSpec> objects;
    std::vector<ActivityScript> classes;
};

/// The desk-scale 15-joint rest pose all scripts start from.
const std::map<Joint, Point2D>& base_pose();

/// Deterministic for fixed (spec, seed). Subjects differ by a fixed
/// translation and body-size scaling (both relation-preserving) plus the
/// seeded jitter. Throws qstr::Error("synth") on fewer than 2 classes or a
/// class with fewer than 2 frames.
Dataset generate(const Spec& spec, std::uint64_t seed);

/// 4-class, 4-subject, 3-repetition benchmark script used by the end-to-end
/// tests and the quickstart.
Spec desk_benchmark_spec();

Spec spec_from_json_file(const std::filesystem::path& file);
std::string spec_to_json(const Spec& spec);

}  // namespace qstr::synth
