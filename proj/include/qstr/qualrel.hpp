#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "qstr/entities.hpp"
#include "qstr/geometry.hpp"
#include "qstr/temporal.hpp"
#include "qstr/tracks.hpp"

namespace qstr {

/// Coarse distance category from the rectangle overlap ratio.
enum class DistanceRelation : std::uint8_t {
    Discrete,        // D: disjoint neighborhoods
    PartialOverlap,  // PO
    Part,            // P: near-containment either way
};

/// Combined spatial relation. PO and P ignore direction; D splits into five
/// inclination bins (D1 = above ... D5 = below). The undirected D value is
/// only produced when direction relations are disabled.
enum class SpatialRelation : std::uint8_t {
    PO,
    P,
    D1,
    D2,
    D3,
    D4,
    D5,
    D,
};

std::string_view spatial_name(SpatialRelation r);

/// The full 7-relation alphabet (direction enabled).
const std::vector<SpatialRelation>& full_spatial_alphabet();

/// The 3-relation alphabet used when direction is disabled.
const std::vector<SpatialRelation>& distance_only_alphabet();

struct QualConfig {
    double tau_d = 0.0;            // ratio <= tau_d  -> D
    double tau_p = 0.9;            // ratio >= tau_p  -> P
    int min_dwell = 3;             // minimum run length in frames
    bool up_is_negative_y = true;  // zenith points toward decreasing y
};

DistanceRelation distance_relation(double ratio, const QualConfig& cfg);

/// Inclination bin 1..5 of the displacement from -> to, measured from the
/// zenith and folded over the vertical axis (left and right mirror into the
/// same bin). Bin boundaries at 22.5/67.5/112.5/157.5 degrees; boundary
/// angles fall into the lower bin. Throws qstr::Error("direction") on
/// coincident points.
int direction_bin(const Point2D& from, const Point2D& to, const QualConfig& cfg);

SpatialRelation spatial_relation(DistanceRelation dist, int bin);

/// Per-frame spatial relations of one entity pair, oriented first -> second
/// in PairKey order.
struct RelationSeries {
    PairKey pair;
    std::vector<SpatialRelation> relations;
};

/// Maximal frame interval over which one pair holds one relation.
struct Episode {
    PairKey pair;
    SpatialRelation relation = SpatialRelation::PO;
    Interval span;
};

/// One series per unordered pair over (scope joints plus all objects), each
/// of length video.frame_count(). With use_direction = false the D bins
/// collapse to the undirected D and direction is never evaluated. A frame
/// with coincident centers reuses the previous frame's bin; if no bin exists
/// yet and the frame needs one, throws qstr::Error("direction").
std::vector<RelationSeries> relation_series(const TrackedVideo& video, Scope scope,
                                            const QualConfig& cfg, const ScaleTable& scales,
                                            const BodyMetrics& metrics,
                                            bool use_direction = true);

/// Absorb maximal runs shorter than cfg.min_dwell into the preceding run
/// (the following run at the sequence start), repeating to fixpoint. Length
/// is preserved; a whole series shorter than min_dwell is returned as is.
RelationSeries dwell_filter(const RelationSeries& series, const QualConfig& cfg);

/// Run-length encoding; episodes tile the frame range exactly.
/// Throws qstr::Error("episodes") on an empty series.
std::vector<Episode> compress_episodes(const RelationSeries& series);

/// Inverse of compress_episodes.
RelationSeries expand_episodes(const std::vector<Episode>& episodes);

}  // namespace qstr
