#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "qstr/entities.hpp"

using namespace qstr;

TEST_CASE("joint names round-trip") {
    for (int i = 0; i < kJointCount; ++i) {
        const auto j = static_cast<Joint>(i);
        const auto back = joint_from_name(joint_name(j));
        REQUIRE(back.has_value());
        CHECK(*back == j);
    }
    CHECK(!joint_from_name("elbow").has_value());
    CHECK(tracked_joints().size() == 15);
    CHECK(std::find(tracked_joints().begin(), tracked_joints().end(), Joint::Hip) ==
          tracked_joints().end());
}

TEST_CASE("lexical ranks order joints by name") {
    std::vector<std::string> names;
    for (int i = 0; i < kJointCount; ++i) {
        names.emplace_back(joint_name(static_cast<Joint>(i)));
    }
    std::sort(names.begin(), names.end());
    for (int i = 0; i < kJointCount; ++i) {
        const auto j = static_cast<Joint>(i);
        CHECK(names[static_cast<std::size_t>(joint_lexical_rank(j))] == joint_name(j));
    }
}

TEST_CASE("entity ordering: joints before objects, then lexical / numeric") {
    const EntityRef head = EntityRef::make_joint(Joint::Head);
    const EntityRef torso = EntityRef::make_joint(Joint::Torso);
    const EntityRef neck = EntityRef::make_joint(Joint::Neck);
    const EntityRef obj0 = EntityRef::make_object(0);
    const EntityRef obj2 = EntityRef::make_object(2);
    const EntityRef obj10 = EntityRef::make_object(10);

    CHECK(head < obj0);
    CHECK(torso < obj0);     // any joint before any object
    CHECK(head < neck);      // "head" < "neck"
    CHECK(neck < torso);     // "neck" < "torso"
    CHECK(obj0 < obj2);
    CHECK(obj2 < obj10);     // numeric, not decimal-lexical
    CHECK(EntityRef::make_joint(Joint::LeftHand) < neck);  // "left_hand" < "neck"
}

TEST_CASE("PairKey canonicalizes and rejects self-pairs") {
    const EntityRef a = EntityRef::make_joint(Joint::Torso);
    const EntityRef b = EntityRef::make_joint(Joint::Head);
    const PairKey p(a, b);
    CHECK(p.first == b);
    CHECK(p.second == a);
    CHECK(p == PairKey(b, a));
    CHECK_THROWS(PairKey(a, a));

    const PairKey q(EntityRef::make_object(1), b);
    CHECK(q.first == b);
    CHECK(pair_order(p, p) == std::strong_ordering::equal);
}
