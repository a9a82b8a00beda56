#include "qstr/tracks.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qstr/error.hpp"

namespace qstr {

std::vector<int> TrackedVideo::object_ids() const {
    std::set<int> ids;
    for (const auto& f : frames) {
        for (const auto& [id, box] : f.objects) ids.insert(id);
    }
    return {ids.begin(), ids.end()};
}

LabelTable::LabelTable(std::vector<std::string> sorted_names) : names_(std::move(sorted_names)) {}

LabelTable LabelTable::from_videos(const std::vector<TrackedVideo>& videos) {
    std::set<std::string> names;
    for (const auto& v : videos) names.insert(v.label);
    return LabelTable(std::vector<std::string>(names.begin(), names.end()));
}

int LabelTable::index_of(const std::string& name) const {
    const auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name) {
        throw Error("labels", "unknown activity label: " + name);
    }
    return static_cast<int>(it - names_.begin());
}

std::vector<std::string> Dataset::subjects() const {
    std::set<std::string> ids;
    for (const auto& v : videos) ids.insert(v.subject_id);
    return {ids.begin(), ids.end()};
}

BodyMetrics body_metrics(const FrameSnapshot& frame) {
    const double length = std::abs(frame.joint(Joint::LeftHip).x - frame.joint(Joint::RightHip).x);
    const double width = std::abs(frame.joint(Joint::Neck).y - frame.joint(Joint::Torso).y);
    if (length <= 0.0 || width <= 0.0) {
        throw Error("body-metrics", "degenerate pose in frame " +
                                        std::to_string(frame.frame_index) +
                                        ": zero hip span or neck-torso drop");
    }
    return {length, width};
}

namespace {

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

BodyMetrics video_body_metrics(const TrackedVideo& video) {
    std::vector<double> lengths;
    std::vector<double> widths;
    lengths.reserve(video.frames.size());
    widths.reserve(video.frames.size());
    for (const auto& frame : video.frames) {
        try {
            const BodyMetrics m = body_metrics(frame);
            lengths.push_back(m.length);
            widths.push_back(m.width);
        } catch (const Error&) {
            // degenerate single frames are tolerated; the median skips them
        }
    }
    if (lengths.empty()) {
        throw Error("body-metrics",
                    "video " + video.video_id + ": no frame with a usable pose");
    }
    return {median(std::move(lengths)), median(std::move(widths))};
}

ScaleTable ScaleTable::defaults() {
    ScaleTable t;
    for (int i = 0; i < kJointCount; ++i) {
        t.entries_[static_cast<Joint>(i)] = {0.75, 0.75};
    }
    for (Joint j : {Joint::Head, Joint::Torso, Joint::Hip, Joint::LeftHip, Joint::RightHip}) {
        t.entries_[j] = {1.0, 1.0};
    }
    for (Joint j : {Joint::LeftHand, Joint::RightHand, Joint::LeftFoot, Joint::RightFoot}) {
        t.entries_[j] = {0.5, 0.5};
    }
    return t;
}

const JointScale& ScaleTable::scale_for(Joint j) const {
    const auto it = entries_.find(j);
    if (it == entries_.end()) {
        throw Error("scales", "no scale entry for joint " + std::string(joint_name(j)));
    }
    return it->second;
}

void ScaleTable::set(Joint j, JointScale s) {
    entries_[j] = s;
}

Point2D entity_center(const FrameSnapshot& frame, const EntityRef& ref) {
    if (ref.kind == EntityRef::Kind::Object) {
        const auto it = frame.objects.find(ref.object_id);
        if (it == frame.objects.end()) {
            throw Error("rectangles", "object " + std::to_string(ref.object_id) +
                                          " missing in frame " +
                                          std::to_string(frame.frame_index));
        }
        return it->second.center;
    }
    if (ref.joint == Joint::Hip) {
        const Point2D& l = frame.joint(Joint::LeftHip);
        const Point2D& r = frame.joint(Joint::RightHip);
        return {0.5 * (l.x + r.x), 0.5 * (l.y + r.y)};
    }
    return frame.joint(ref.joint);
}

Rect entity_rect(const FrameSnapshot& frame, const EntityRef& ref,
                 const ScaleTable& scales, const BodyMetrics& metrics) {
    if (ref.kind == EntityRef::Kind::Object) {
        const auto it = frame.objects.find(ref.object_id);
        if (it == frame.objects.end()) {
            throw Error("rectangles", "object " + std::to_string(ref.object_id) +
                                          " missing in frame " +
                                          std::to_string(frame.frame_index));
        }
        return it->second;
    }
    const JointScale& s = scales.scale_for(ref.joint);
    return {entity_center(frame, ref), s.length_mult * metrics.length,
            s.width_mult * metrics.width};
}

std::map<EntityRef, Rect> entity_rectangles(const FrameSnapshot& frame,
                                            const ScaleTable& scales,
                                            const BodyMetrics& metrics) {
    std::map<EntityRef, Rect> out;
    for (Joint j : tracked_joints()) {
        const EntityRef ref = EntityRef::make_joint(j);
        out.emplace(ref, entity_rect(frame, ref, scales, metrics));
    }
    for (const auto& [id, box] : frame.objects) {
        out.emplace(EntityRef::make_object(id), box);
    }
    return out;
}

std::string_view scope_name(Scope s) {
    switch (s) {
        case Scope::Whole: return "whole";
        case Scope::Upper: return "upper";
        case Scope::Lower: return "lower";
    }
    return "unknown";
}

const std::vector<EntityRef>& scope_joints(Scope s) {
    static const std::vector<EntityRef> whole = [] {
        std::vector<EntityRef> out;
        for (Joint j : tracked_joints()) out.push_back(EntityRef::make_joint(j));
        return out;
    }();
    static const std::vector<EntityRef> upper = {
        EntityRef::make_joint(Joint::Head),
        EntityRef::make_joint(Joint::Neck),
        EntityRef::make_joint(Joint::LeftHand),
        EntityRef::make_joint(Joint::RightHand),
    };
    static const std::vector<EntityRef> lower = {
        EntityRef::make_joint(Joint::Hip),
        EntityRef::make_joint(Joint::Torso),
        EntityRef::make_joint(Joint::LeftFoot),
        EntityRef::make_joint(Joint::RightFoot),
    };
    switch (s) {
        case Scope::Upper: return upper;
        case Scope::Lower: return lower;
        case Scope::Whole: break;
    }
    return whole;
}

}  // namespace qstr
