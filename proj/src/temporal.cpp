#include "qstr/temporal.hpp"

#include <stdexcept>

namespace qstr {

std::string_view temporal_name(TemporalRelation r) {
    switch (r) {
        case TemporalRelation::Before: return "before";
        case TemporalRelation::Meets: return "meets";
        case TemporalRelation::Overlaps: return "overlaps";
        case TemporalRelation::SDF: return "sdf";
        case TemporalRelation::Equals: return "equals";
    }
    return "unknown";
}

TemporalRelation interval_relation(const Interval& x, const Interval& y) {
    if (y < x) {
        throw std::invalid_argument("interval_relation: arguments not in canonical order");
    }
    if (x == y) {
        return TemporalRelation::Equals;
    }
    if (x.start == y.start) {
        // x.end < y.end by canonical order: shared start.
        return TemporalRelation::SDF;
    }
    // x.start < y.start from here on.
    if (x.end + 1 < y.start) {
        return TemporalRelation::Before;
    }
    if (x.end + 1 == y.start) {
        return TemporalRelation::Meets;
    }
    // y.start <= x.end: the intervals share frames.
    if (x.end < y.end) {
        return TemporalRelation::Overlaps;
    }
    // Shared end (y finishes x) or y strictly inside x.
    return TemporalRelation::SDF;
}

}  // namespace qstr
