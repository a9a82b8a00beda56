#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "qstr/error.hpp"
#include "qstr/rng.hpp"
#include "qstr/tracks.hpp"

using namespace qstr;

TEST_CASE("body_metrics from hip span and neck-torso drop") {
    FrameSnapshot f = testutil::complete_frame();
    f.joint(Joint::LeftHip) = {100.0, 200.0};
    f.joint(Joint::RightHip) = {140.0, 200.0};
    f.joint(Joint::Neck) = {120.0, 100.0};
    f.joint(Joint::Torso) = {120.0, 160.0};

    const BodyMetrics m = body_metrics(f);
    CHECK(m.length == doctest::Approx(40.0));
    CHECK(m.width == doctest::Approx(60.0));

    SUBCASE("degenerate pose") {
        f.joint(Joint::RightHip) = f.joint(Joint::LeftHip);
        CHECK_THROWS_AS(body_metrics(f), Error);
    }
}

TEST_CASE("body_metrics is translation-invariant and scale-equivariant") {
    std::mt19937_64 gen(11);
    for (int rep = 0; rep < 200; ++rep) {
        FrameSnapshot f = testutil::complete_frame();
        for (Joint j : tracked_joints()) {
            f.joint(j).x += rng::symmetric_double(gen, 40.0);
            f.joint(j).y += rng::symmetric_double(gen, 40.0);
        }
        BodyMetrics base;
        try {
            base = body_metrics(f);
        } catch (const Error&) {
            continue;  // randomized pose collapsed; not the property under test
        }

        FrameSnapshot translated = f;
        const double dx = rng::symmetric_double(gen, 500.0);
        const double dy = rng::symmetric_double(gen, 500.0);
        for (Joint j : tracked_joints()) {
            translated.joint(j).x += dx;
            translated.joint(j).y += dy;
        }
        const BodyMetrics t = body_metrics(translated);
        CHECK(t.length == doctest::Approx(base.length));
        CHECK(t.width == doctest::Approx(base.width));

        FrameSnapshot scaled = f;
        const double c = 0.5 + rng::unit_double(gen) * 3.0;
        for (Joint j : tracked_joints()) {
            scaled.joint(j).x *= c;
            scaled.joint(j).y *= c;
        }
        const BodyMetrics s = body_metrics(scaled);
        CHECK(s.length == doctest::Approx(c * base.length));
        CHECK(s.width == doctest::Approx(c * base.width));
    }
}

TEST_CASE("video_body_metrics takes the per-component median") {
    TrackedVideo video;
    video.video_id = "v";
    for (int i = 0; i < 3; ++i) {
        FrameSnapshot f = testutil::complete_frame(i);
        f.joint(Joint::LeftHip) = {100.0, 200.0};
        f.joint(Joint::RightHip) = {100.0 + 30.0 + 10.0 * i, 200.0};  // 30, 40, 50
        video.frames.push_back(f);
    }
    CHECK(video_body_metrics(video).length == doctest::Approx(40.0));

    // Even count: midpoint average of the middle two.
    FrameSnapshot f = testutil::complete_frame(3);
    f.joint(Joint::LeftHip) = {100.0, 200.0};
    f.joint(Joint::RightHip) = {190.0, 200.0};  // 30, 40, 50, 90 -> 45
    video.frames.push_back(f);
    CHECK(video_body_metrics(video).length == doctest::Approx(45.0));
}

TEST_CASE("entity_rectangles sizes joints by scale table and passes objects through") {
    FrameSnapshot f = testutil::complete_frame();
    f.joint(Joint::LeftHip) = {100.0, 200.0};
    f.joint(Joint::RightHip) = {140.0, 200.0};
    f.joint(Joint::Neck) = {120.0, 100.0};
    f.joint(Joint::Torso) = {120.0, 160.0};
    f.objects[0] = Rect{{400.0, 300.0}, 80.0, 50.0};
    const BodyMetrics m = body_metrics(f);  // 40 x 60
    const ScaleTable scales = ScaleTable::defaults();

    const auto rects = entity_rectangles(f, scales, m);
    CHECK(rects.size() == 16);  // 15 joints + 1 object

    const Rect head = rects.at(EntityRef::make_joint(Joint::Head));
    CHECK(head.center == f.joint(Joint::Head));
    CHECK(head.width == doctest::Approx(40.0));
    CHECK(head.height == doctest::Approx(60.0));

    const Rect hand = rects.at(EntityRef::make_joint(Joint::LeftHand));
    CHECK(hand.width == doctest::Approx(20.0));
    CHECK(hand.height == doctest::Approx(30.0));

    CHECK(rects.at(EntityRef::make_object(0)) == f.objects[0]);

    SUBCASE("missing scale entry") {
        const ScaleTable empty;
        CHECK_THROWS_AS(entity_rect(f, EntityRef::make_joint(Joint::Head), empty, m), Error);
    }
}

TEST_CASE("derived hip entity sits at the hip midpoint") {
    FrameSnapshot f = testutil::complete_frame();
    f.joint(Joint::LeftHip) = {100.0, 200.0};
    f.joint(Joint::RightHip) = {140.0, 210.0};
    const Point2D c = entity_center(f, EntityRef::make_joint(Joint::Hip));
    CHECK(c.x == doctest::Approx(120.0));
    CHECK(c.y == doctest::Approx(205.0));

    const BodyMetrics m{40.0, 60.0};
    const Rect r = entity_rect(f, EntityRef::make_joint(Joint::Hip), ScaleTable::defaults(), m);
    CHECK(r.width == doctest::Approx(40.0));
    CHECK(r.height == doctest::Approx(60.0));
}

TEST_CASE("scopes") {
    CHECK(scope_joints(Scope::Whole).size() == 15);
    CHECK(scope_joints(Scope::Upper).size() == 4);
    CHECK(scope_joints(Scope::Lower).size() == 4);
    // Lower uses the derived hip, not the left/right hip joints.
    const auto& lower = scope_joints(Scope::Lower);
    CHECK(std::find(lower.begin(), lower.end(), EntityRef::make_joint(Joint::Hip)) !=
          lower.end());
}

TEST_CASE("label table is a sorted bijection") {
    std::vector<TrackedVideo> videos(3);
    videos[0].label = "walk";
    videos[1].label = "sit";
    videos[2].label = "walk";
    const LabelTable table = LabelTable::from_videos(videos);
    CHECK(table.size() == 2);
    CHECK(table.name(0) == "sit");
    CHECK(table.name(1) == "walk");
    CHECK(table.index_of("walk") == 1);
    CHECK_THROWS_AS(table.index_of("jump"), Error);
}
