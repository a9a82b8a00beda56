#pragma once

#include <cmath>

namespace qstr {

/// Image-plane point: x grows rightward, y grows downward.
struct Point2D {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline bool finite(const Point2D& p) {
    return std::isfinite(p.x) && std::isfinite(p.y);
}

/// Axis-aligned rectangle given by center and positive extents.
struct Rect {
    Point2D center;
    double width = 0.0;
    double height = 0.0;

    double area() const { return width * height; }
    double left() const { return center.x - width / 2.0; }
    double right() const { return center.x + width / 2.0; }
    double top() const { return center.y - height / 2.0; }
    double bottom() const { return center.y + height / 2.0; }

    friend bool operator==(const Rect&, const Rect&) = default;
};

/// Intersection area divided by the smaller rectangle's area; 0 when
/// disjoint, 1 when the smaller rectangle is contained in the other.
/// Symmetric in its arguments.
double overlap_ratio(const Rect& a, const Rect& b);

}  // namespace qstr
