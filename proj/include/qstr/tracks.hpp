#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "qstr/entities.hpp"
#include "qstr/geometry.hpp"

namespace qstr {

/// One frame of joint positions and object boxes. Validated frames have all
/// 15 joints present; the presence mask only matters between parsing and
/// validation.
struct FrameSnapshot {
    static constexpr std::uint16_t kAllJoints = (1u << kTrackedJointCount) - 1;

    int frame_index = 0;
    std::array<Point2D, kTrackedJointCount> joints{};
    std::uint16_t joints_present = kAllJoints;
    std::map<int, Rect> objects;

    const Point2D& joint(Joint j) const {
        return joints[static_cast<std::size_t>(j)];
    }
    Point2D& joint(Joint j) {
        return joints[static_cast<std::size_t>(j)];
    }
    bool has_joint(Joint j) const {
        return (joints_present >> static_cast<unsigned>(j)) & 1u;
    }
    void set_joint(Joint j, Point2D p) {
        joints[static_cast<std::size_t>(j)] = p;
        joints_present |= static_cast<std::uint16_t>(1u << static_cast<unsigned>(j));
    }
    bool complete() const { return joints_present == kAllJoints; }
};

struct TrackedVideo {
    std::string video_id;
    std::string subject_id;
    std::string label;
    std::vector<FrameSnapshot> frames;

    int frame_count() const { return static_cast<int>(frames.size()); }
    std::vector<int> object_ids() const;
};

struct ActivityLabel {
    int class_index = 0;
    std::string name;
};

/// Bijection between class indices and label names; names sorted.
class LabelTable {
public:
    LabelTable() = default;
    explicit LabelTable(std::vector<std::string> sorted_names);

    static LabelTable from_videos(const std::vector<TrackedVideo>& videos);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int index) const { return names_.at(static_cast<std::size_t>(index)); }
    const std::vector<std::string>& names() const { return names_; }
    int index_of(const std::string& name) const;  // throws on unknown label

private:
    std::vector<std::string> names_;
};

struct Dataset {
    std::vector<TrackedVideo> videos;  // sorted by (subject_id, video_id)
    LabelTable labels;

    /// Distinct subject ids in sorted order.
    std::vector<std::string> subjects() const;
};

/// Basic rectangle extents derived from the skeleton: length from the
/// horizontal hip span, width from the vertical neck-to-torso drop.
struct BodyMetrics {
    double length = 0.0;
    double width = 0.0;
};

/// Per-frame metrics. Throws qstr::Error("body-metrics") on a degenerate pose
/// (zero hip span or zero neck-torso drop).
BodyMetrics body_metrics(const FrameSnapshot& frame);

/// Per-video metrics: component-wise median of the per-frame values over all
/// frames with a non-degenerate pose (even count: midpoint average). Throws
/// when no frame is usable.
BodyMetrics video_body_metrics(const TrackedVideo& video);

/// (length multiplier, width multiplier) per joint.
struct JointScale {
    double length_mult = 1.0;
    double width_mult = 1.0;

    friend bool operator==(const JointScale&, const JointScale&) = default;
};

class ScaleTable {
public:
    /// head/torso/hip 1.0, hands/feet 0.5, everything else 0.75.
    static ScaleTable defaults();

    const JointScale& scale_for(Joint j) const;  // throws on missing entry
    void set(Joint j, JointScale s);
    const std::map<Joint, JointScale>& entries() const { return entries_; }

private:
    std::map<Joint, JointScale> entries_;
};

/// Rectangle for one entity in one frame: joints get a rect centered on the
/// joint position sized by the scale table and body metrics, the derived Hip
/// entity is centered on the mid-point of the two hips, object boxes pass
/// through unchanged.
Rect entity_rect(const FrameSnapshot& frame, const EntityRef& ref,
                 const ScaleTable& scales, const BodyMetrics& metrics);

/// Center used for direction relations (joint position or box center).
Point2D entity_center(const FrameSnapshot& frame, const EntityRef& ref);

/// Rects for every tracked joint present plus every object box.
std::map<EntityRef, Rect> entity_rectangles(const FrameSnapshot& frame,
                                            const ScaleTable& scales,
                                            const BodyMetrics& metrics);

enum class Scope : std::uint8_t { Whole, Upper, Lower };

inline constexpr std::array<Scope, 3> kAllScopes = {Scope::Whole, Scope::Upper, Scope::Lower};

std::string_view scope_name(Scope s);

/// Joint members of a body scope. Whole = the 15 tracked joints;
/// Upper = head, neck, both hands; Lower = hip (derived), torso, both feet.
const std::vector<EntityRef>& scope_joints(Scope s);

}  // namespace qstr
