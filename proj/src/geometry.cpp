#include "qstr/geometry.hpp"

#include <algorithm>

namespace qstr {

double overlap_ratio(const Rect& a, const Rect& b) {
    const double dx = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
    const double dy = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
    if (dx <= 0.0 || dy <= 0.0) {
        return 0.0;
    }
    const double smaller = std::min(a.area(), b.area());
    if (smaller <= 0.0) {
        return 0.0;
    }
    // Clamp: floating error can push containment a hair past 1.
    return std::min(1.0, (dx * dy) / smaller);
}

}  // namespace qstr
