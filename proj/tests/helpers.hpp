#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "qstr/qualrel.hpp"
#include "qstr/rng.hpp"
#include "qstr/tracks.hpp"

namespace testutil {

/// Temp directory removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("qstr_test_" + tag + "_" + std::to_string(counter_++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

/// A frame with every joint at a plausible desk-scale position.
inline qstr::FrameSnapshot complete_frame(int index = 0) {
    qstr::FrameSnapshot f;
    f.frame_index = index;
    const double xs[] = {200, 200, 200, 170, 230, 160, 240, 185, 215, 182, 218, 150, 250, 180, 220};
    const double ys[] = {60, 95, 150, 100, 100, 135, 135, 205, 205, 255, 255, 170, 170, 305, 305};
    for (int j = 0; j < qstr::kTrackedJointCount; ++j) {
        f.joints[static_cast<std::size_t>(j)] = {xs[j], ys[j]};
    }
    return f;
}

inline qstr::Rect random_rect(std::mt19937_64& gen) {
    return {{qstr::rng::unit_double(gen) * 200.0 - 100.0,
             qstr::rng::unit_double(gen) * 200.0 - 100.0},
            0.5 + qstr::rng::unit_double(gen) * 60.0,
            0.5 + qstr::rng::unit_double(gen) * 60.0};
}

inline qstr::PairKey test_pair() {
    return {qstr::EntityRef::make_joint(qstr::Joint::Head),
            qstr::EntityRef::make_joint(qstr::Joint::Neck)};
}

inline qstr::RelationSeries random_series(std::mt19937_64& gen, int length) {
    static const qstr::SpatialRelation lib[] = {
        qstr::SpatialRelation::PO, qstr::SpatialRelation::P,  qstr::SpatialRelation::D1,
        qstr::SpatialRelation::D2, qstr::SpatialRelation::D3, qstr::SpatialRelation::D4,
        qstr::SpatialRelation::D5,
    };
    qstr::RelationSeries s{test_pair(), {}};
    for (int i = 0; i < length; ++i) {
        s.relations.push_back(lib[qstr::rng::index_below(gen, 7)]);
    }
    return s;
}

}  // namespace testutil
