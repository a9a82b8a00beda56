#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qstr {

/// The 15 tracked skeletal joints, plus Hip: a derived mid-hip entity used by
/// the lower-body scope. Hip never appears in input frames.
enum class Joint : std::uint8_t {
    Head,
    Neck,
    Torso,
    LeftShoulder,
    RightShoulder,
    LeftElbow,
    RightElbow,
    LeftHip,
    RightHip,
    LeftKnee,
    RightKnee,
    LeftHand,
    RightHand,
    LeftFoot,
    RightFoot,
    Hip,
};

inline constexpr int kTrackedJointCount = 15;
inline constexpr int kJointCount = 16;

/// The 15 input joints, in enum order.
const std::array<Joint, kTrackedJointCount>& tracked_joints();

std::string_view joint_name(Joint j);
std::optional<Joint> joint_from_name(std::string_view name);

/// Rank of the joint's name in lexicographic order over all joint names;
/// used for the pipeline-wide entity ordering.
int joint_lexical_rank(Joint j);

/// A participating entity: a skeletal joint or a tracked object.
struct EntityRef {
    enum class Kind : std::uint8_t { Joint, Object };

    Kind kind = Kind::Joint;
    Joint joint = Joint::Head;  // meaningful when kind == Joint
    int object_id = 0;          // meaningful when kind == Object

    static EntityRef make_joint(Joint j) { return {Kind::Joint, j, 0}; }
    static EntityRef make_object(int id) { return {Kind::Object, Joint::Head, id}; }

    friend bool operator==(const EntityRef& a, const EntityRef& b) {
        if (a.kind != b.kind) return false;
        return a.kind == Kind::Joint ? a.joint == b.joint : a.object_id == b.object_id;
    }
};

/// Total order: joints before objects; joints by lexical name, objects by id.
std::strong_ordering entity_order(const EntityRef& a, const EntityRef& b);

inline bool operator<(const EntityRef& a, const EntityRef& b) {
    return entity_order(a, b) == std::strong_ordering::less;
}

std::string entity_to_string(const EntityRef& e);

/// Unordered entity pair in canonical orientation (first < second).
struct PairKey {
    EntityRef first;
    EntityRef second;

    /// Canonicalizes the orientation. The two entities must differ.
    PairKey(EntityRef a, EntityRef b);

    friend bool operator==(const PairKey& a, const PairKey& b) {
        return a.first == b.first && a.second == b.second;
    }
};

std::strong_ordering pair_order(const PairKey& a, const PairKey& b);

inline bool operator<(const PairKey& a, const PairKey& b) {
    return pair_order(a, b) == std::strong_ordering::less;
}

}  // namespace qstr
