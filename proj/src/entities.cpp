#include "qstr/entities.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>

namespace qstr {

namespace {

constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "head",
    "neck",
    "torso",
    "left_shoulder",
    "right_shoulder",
    "left_elbow",
    "right_elbow",
    "left_hip",
    "right_hip",
    "left_knee",
    "right_knee",
    "left_hand",
    "right_hand",
    "left_foot",
    "right_foot",
    "hip",
};

const std::array<int, kJointCount>& lexical_ranks() {
    static const std::array<int, kJointCount> ranks = [] {
        std::array<int, kJointCount> order{};
        for (int i = 0; i < kJointCount; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [](int a, int b) {
            return kJointNames[static_cast<std::size_t>(a)] <
                   kJointNames[static_cast<std::size_t>(b)];
        });
        std::array<int, kJointCount> ranks{};
        for (int r = 0; r < kJointCount; ++r) ranks[static_cast<std::size_t>(order[r])] = r;
        return ranks;
    }();
    return ranks;
}

}  // namespace

const std::array<Joint, kTrackedJointCount>& tracked_joints() {
    static const std::array<Joint, kTrackedJointCount> joints = [] {
        std::array<Joint, kTrackedJointCount> out{};
        for (int i = 0; i < kTrackedJointCount; ++i) out[i] = static_cast<Joint>(i);
        return out;
    }();
    return joints;
}

std::string_view joint_name(Joint j) {
    return kJointNames[static_cast<std::size_t>(j)];
}

std::optional<Joint> joint_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kJointNames.size(); ++i) {
        if (kJointNames[i] == name) return static_cast<Joint>(i);
    }
    return std::nullopt;
}

int joint_lexical_rank(Joint j) {
    return lexical_ranks()[static_cast<std::size_t>(j)];
}

std::strong_ordering entity_order(const EntityRef& a, const EntityRef& b) {
    if (a.kind != b.kind) {
        return a.kind == EntityRef::Kind::Joint ? std::strong_ordering::less
                                                : std::strong_ordering::greater;
    }
    if (a.kind == EntityRef::Kind::Joint) {
        return joint_lexical_rank(a.joint) <=> joint_lexical_rank(b.joint);
    }
    return a.object_id <=> b.object_id;
}

std::string entity_to_string(const EntityRef& e) {
    if (e.kind == EntityRef::Kind::Joint) {
        return std::string(joint_name(e.joint));
    }
    return "obj" + std::to_string(e.object_id);
}

PairKey::PairKey(EntityRef a, EntityRef b) {
    const auto ord = entity_order(a, b);
    if (ord == std::strong_ordering::equal) {
        throw std::invalid_argument("PairKey requires two distinct entities");
    }
    if (ord == std::strong_ordering::less) {
        first = a;
        second = b;
    } else {
        first = b;
        second = a;
    }
}

std::strong_ordering pair_order(const PairKey& a, const PairKey& b) {
    const auto first = entity_order(a.first, b.first);
    if (first != std::strong_ordering::equal) return first;
    return entity_order(a.second, b.second);
}

}  // namespace qstr
