#include "qstr/qualrel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "qstr/error.hpp"

namespace qstr {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
// Half-width bins at the poles: 1 = [0, 22.5], 5 = (157.5, 180].
constexpr std::array<double, 4> kBinBoundaries = {22.5 * kDeg, 67.5 * kDeg, 112.5 * kDeg,
                                                  157.5 * kDeg};

}  // namespace

std::string_view spatial_name(SpatialRelation r) {
    switch (r) {
        case SpatialRelation::PO: return "PO";
        case SpatialRelation::P: return "P";
        case SpatialRelation::D1: return "D1";
        case SpatialRelation::D2: return "D2";
        case SpatialRelation::D3: return "D3";
        case SpatialRelation::D4: return "D4";
        case SpatialRelation::D5: return "D5";
        case SpatialRelation::D: return "D";
    }
    return "unknown";
}

const std::vector<SpatialRelation>& full_spatial_alphabet() {
    static const std::vector<SpatialRelation> alphabet = {
        SpatialRelation::PO, SpatialRelation::P,  SpatialRelation::D1, SpatialRelation::D2,
        SpatialRelation::D3, SpatialRelation::D4, SpatialRelation::D5,
    };
    return alphabet;
}

const std::vector<SpatialRelation>& distance_only_alphabet() {
    static const std::vector<SpatialRelation> alphabet = {
        SpatialRelation::PO,
        SpatialRelation::P,
        SpatialRelation::D,
    };
    return alphabet;
}

DistanceRelation distance_relation(double ratio, const QualConfig& cfg) {
    if (ratio <= cfg.tau_d) return DistanceRelation::Discrete;
    if (ratio >= cfg.tau_p) return DistanceRelation::Part;
    return DistanceRelation::PartialOverlap;
}

int direction_bin(const Point2D& from, const Point2D& to, const QualConfig& cfg) {
    const double dx = to.x - from.x;
    const double dy = to.y - from.y;
    if (dx == 0.0 && dy == 0.0) {
        throw Error("direction", "direction undefined for coincident points");
    }
    // Inclination from the zenith, folded over the vertical axis.
    const double toward_zenith = cfg.up_is_negative_y ? -dy : dy;
    const double theta = std::atan2(std::abs(dx), toward_zenith);
    for (std::size_t i = 0; i < kBinBoundaries.size(); ++i) {
        if (theta <= kBinBoundaries[i]) return static_cast<int>(i) + 1;
    }
    return 5;
}

SpatialRelation spatial_relation(DistanceRelation dist, int bin) {
    switch (dist) {
        case DistanceRelation::PartialOverlap:
            return SpatialRelation::PO;
        case DistanceRelation::Part:
            return SpatialRelation::P;
        case DistanceRelation::Discrete:
            break;
    }
    switch (bin) {
        case 1: return SpatialRelation::D1;
        case 2: return SpatialRelation::D2;
        case 3: return SpatialRelation::D3;
        case 4: return SpatialRelation::D4;
        case 5: return SpatialRelation::D5;
        default: throw Error("direction", "direction bin out of range");
    }
}

std::vector<RelationSeries> relation_series(const TrackedVideo& video, Scope scope,
                                            const QualConfig& cfg, const ScaleTable& scales,
                                            const BodyMetrics& metrics, bool use_direction) {
    std::vector<EntityRef> entities = scope_joints(scope);
    for (int id : video.object_ids()) {
        entities.push_back(EntityRef::make_object(id));
    }
    std::sort(entities.begin(), entities.end());

    const int frames = video.frame_count();
    const std::size_t n = entities.size();

    // Rects and centers once per (frame, entity).
    std::vector<std::vector<Rect>> rects(static_cast<std::size_t>(frames));
    std::vector<std::vector<Point2D>> centers(static_cast<std::size_t>(frames));
    for (int t = 0; t < frames; ++t) {
        auto& row = rects[static_cast<std::size_t>(t)];
        auto& crow = centers[static_cast<std::size_t>(t)];
        row.reserve(n);
        crow.reserve(n);
        for (const EntityRef& e : entities) {
            row.push_back(entity_rect(video.frames[static_cast<std::size_t>(t)], e, scales,
                                      metrics));
            crow.push_back(row.back().center);
        }
    }

    std::vector<RelationSeries> out;
    out.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            RelationSeries series{PairKey(entities[i], entities[j]), {}};
            series.relations.reserve(static_cast<std::size_t>(frames));
            std::optional<int> last_bin;
            for (int t = 0; t < frames; ++t) {
                const auto ft = static_cast<std::size_t>(t);
                const double ratio = overlap_ratio(rects[ft][i], rects[ft][j]);
                const DistanceRelation dist = distance_relation(ratio, cfg);
                if (!use_direction) {
                    series.relations.push_back(dist == DistanceRelation::Discrete
                                                   ? SpatialRelation::D
                                                   : spatial_relation(dist, 1));
                    continue;
                }
                try {
                    last_bin = direction_bin(centers[ft][i], centers[ft][j], cfg);
                } catch (const Error&) {
                    // coincident centers: keep the previous frame's bin
                }
                if (dist == DistanceRelation::Discrete && !last_bin) {
                    throw Error("direction",
                                "pair " + entity_to_string(entities[i]) + "/" +
                                    entity_to_string(entities[j]) + " in video " +
                                    video.video_id + ": no direction available at frame " +
                                    std::to_string(t));
                }
                series.relations.push_back(spatial_relation(dist, last_bin.value_or(1)));
            }
            out.push_back(std::move(series));
        }
    }
    return out;
}

RelationSeries dwell_filter(const RelationSeries& series, const QualConfig& cfg) {
    struct Run {
        SpatialRelation rel;
        int length;
    };
    std::vector<Run> runs;
    for (SpatialRelation r : series.relations) {
        if (!runs.empty() && runs.back().rel == r) {
            ++runs.back().length;
        } else {
            runs.push_back({r, 1});
        }
    }

    while (runs.size() > 1) {
        std::size_t short_idx = runs.size();
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (runs[i].length < cfg.min_dwell) {
                short_idx = i;
                break;
            }
        }
        if (short_idx == runs.size()) break;

        if (short_idx == 0) {
            runs[1].length += runs[0].length;
            runs.erase(runs.begin());
        } else {
            runs[short_idx - 1].length += runs[short_idx].length;
            runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(short_idx));
            // Absorption can make the neighbors equal; merge them.
            if (short_idx < runs.size() && runs[short_idx - 1].rel == runs[short_idx].rel) {
                runs[short_idx - 1].length += runs[short_idx].length;
                runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(short_idx));
            }
        }
    }

    RelationSeries out{series.pair, {}};
    out.relations.reserve(series.relations.size());
    for (const Run& run : runs) {
        out.relations.insert(out.relations.end(), static_cast<std::size_t>(run.length), run.rel);
    }
    return out;
}

std::vector<Episode> compress_episodes(const RelationSeries& series) {
    if (series.relations.empty()) {
        throw Error("episodes", "cannot compress an empty relation series");
    }
    std::vector<Episode> out;
    int start = 0;
    for (int t = 1; t <= static_cast<int>(series.relations.size()); ++t) {
        const bool boundary = t == static_cast<int>(series.relations.size()) ||
                              series.relations[static_cast<std::size_t>(t)] !=
                                  series.relations[static_cast<std::size_t>(start)];
        if (boundary) {
            out.push_back({series.pair, series.relations[static_cast<std::size_t>(start)],
                           {start, t - 1}});
            start = t;
        }
    }
    return out;
}

RelationSeries expand_episodes(const std::vector<Episode>& episodes) {
    if (episodes.empty()) {
        throw Error("episodes", "cannot expand an empty episode list");
    }
    RelationSeries out{episodes.front().pair, {}};
    for (const Episode& e : episodes) {
        out.relations.insert(out.relations.end(), static_cast<std::size_t>(e.span.length()),
                             e.relation);
    }
    return out;
}

}  // namespace qstr
