#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string_view>

namespace qstr {

/// Inclusive frame interval.
struct Interval {
    int start = 0;
    int end = 0;

    int length() const { return end - start + 1; }

    friend bool operator==(const Interval&, const Interval&) = default;
    friend std::strong_ordering operator<=>(const Interval&, const Interval&) = default;
};

/// Merged interval relations: Allen's forward set with starts/during/finishes
/// collapsed into SDF. Equals is the only symmetric value.
enum class TemporalRelation : std::uint8_t {
    Before,
    Meets,
    Overlaps,
    SDF,
    Equals,
};

inline constexpr std::array<TemporalRelation, 4> kAsymmetricTemporalRelations = {
    TemporalRelation::Before,
    TemporalRelation::Meets,
    TemporalRelation::Overlaps,
    TemporalRelation::SDF,
};

std::string_view temporal_name(TemporalRelation r);

/// Relation between two canonically ordered intervals; requires
/// (x.start, x.end) <= (y.start, y.end) lexicographically and partitions:
///   Equals:   x == y
///   Before:   x.end + 1 <  y.start
///   Meets:    x.end + 1 == y.start   (discrete adjacency)
///   Overlaps: x.start < y.start <= x.end < y.end
///   SDF:      containment either way, shared start, or shared end
/// Throws std::invalid_argument on non-canonical order.
TemporalRelation interval_relation(const Interval& x, const Interval& y);

}  // namespace qstr
