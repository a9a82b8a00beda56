#include "qstr/graph.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "qstr/error.hpp"
#include "qstr/kernels.hpp"

namespace qstr {

int spatial_lexical_rank(SpatialRelation r) {
    switch (r) {
        case SpatialRelation::D: return 0;
        case SpatialRelation::D1: return 1;
        case SpatialRelation::D2: return 2;
        case SpatialRelation::D3: return 3;
        case SpatialRelation::D4: return 4;
        case SpatialRelation::D5: return 5;
        case SpatialRelation::P: return 6;
        case SpatialRelation::PO: return 7;
    }
    return -1;
}

CanonicalPair canonical_pair(const Episode& p, const Episode& q) {
    const Episode* a = &p;
    const Episode* b = &q;
    const auto key_less = [](const Episode& x, const Episode& y) {
        if (x.span != y.span) return x.span < y.span;
        return pair_order(x.pair, y.pair) == std::strong_ordering::less;
    };
    if (key_less(*b, *a)) std::swap(a, b);

    const TemporalRelation rel = interval_relation(a->span, b->span);
    if (rel == TemporalRelation::Equals &&
        spatial_lexical_rank(b->relation) < spatial_lexical_rank(a->relation)) {
        std::swap(a, b);
    }
    return {*a, *b, rel};
}

CellGraph canonical_cell(const Episode& p, const Episode& q) {
    const CanonicalPair cp = canonical_pair(p, q);
    return {cp.first.relation, cp.second.relation, cp.relation};
}

std::vector<Fragment> segment_fragments(std::span<const Episode> episodes, int frame_count) {
    if (episodes.empty()) {
        throw Error("fragments", "no episodes to segment");
    }
    std::set<int> boundaries;
    for (const Episode& e : episodes) {
        if (e.span.start > 0) boundaries.insert(e.span.start);
    }
    std::vector<Fragment> out;
    int start = 0;
    int index = 0;
    for (int b : boundaries) {
        if (b >= frame_count) break;
        out.push_back({index++, {start, b - 1}});
        start = b;
    }
    out.push_back({index, {start, frame_count - 1}});
    return out;
}

std::vector<Window> sliding_windows(std::span<const Fragment> fragments, int window_length,
                                    int stride) {
    if (fragments.empty()) {
        throw Error("windows", "no fragments to window");
    }
    const int total = static_cast<int>(fragments.size());
    const auto make_window = [&](int first, int last) {
        return Window{first, last,
                      {fragments[static_cast<std::size_t>(first)].frames.start,
                       fragments[static_cast<std::size_t>(last)].frames.end}};
    };

    std::vector<Window> out;
    if (total < window_length) {
        out.push_back(make_window(0, total - 1));
        return out;
    }

    int start = 0;
    for (; start + window_length <= total; start += stride) {
        out.push_back(make_window(start, start + window_length - 1));
    }
    // One trailing partial at the next stride position if fragments remain
    // uncovered and the span holds at least 2 fragments.
    if (out.back().last_fragment < total - 1 && start < total && total - start >= 2) {
        out.push_back(make_window(start, total - 1));
    }
    return out;
}

QstGraph build_qst_graph(const Window& window, std::span<const Episode> episodes, Scope scope) {
    std::vector<Episode> clipped;
    clipped.reserve(episodes.size());
    for (const Episode& e : episodes) {
        const int s = std::max(e.span.start, window.frames.start);
        const int t = std::min(e.span.end, window.frames.end);
        if (s <= t) {
            clipped.push_back({e.pair, e.relation, {s, t}});
        }
    }

    QstGraph graph{window, scope, {}};
    const std::size_t n = clipped.size();
    if (n >= 2) graph.cells.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            graph.cells.push_back(canonical_cell(clipped[i], clipped[j]));
        }
    }
    return graph;
}

CellGraphDictionary::CellGraphDictionary(std::vector<SpatialRelation> alphabet)
    : alphabet_(std::move(alphabet)) {
    std::sort(alphabet_.begin(), alphabet_.end(), [](SpatialRelation a, SpatialRelation b) {
        return spatial_lexical_rank(a) < spatial_lexical_rank(b);
    });
    position_.fill(-1);
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
        position_[static_cast<std::size_t>(alphabet_[i])] = static_cast<int>(i);
    }

    const std::size_t n = alphabet_.size();
    entries_.reserve(4 * n * n + n * (n + 1) / 2);
    for (TemporalRelation t : kAsymmetricTemporalRelations) {
        for (SpatialRelation s1 : alphabet_) {
            for (SpatialRelation s2 : alphabet_) {
                entries_.push_back({s1, s2, t});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            entries_.push_back({alphabet_[i], alphabet_[j], TemporalRelation::Equals});
        }
    }
}

std::size_t CellGraphDictionary::index_of(const CellGraph& cell) const {
    const int p1 = position_[static_cast<std::size_t>(cell.first)];
    const int p2 = position_[static_cast<std::size_t>(cell.second)];
    if (p1 < 0 || p2 < 0) {
        throw Error("dictionary", "cell graph label outside the dictionary alphabet");
    }
    const std::size_t n = alphabet_.size();
    if (cell.temporal == TemporalRelation::Equals) {
        if (p1 > p2) {
            throw Error("dictionary", "non-canonical Equals cell graph");
        }
        const auto i = static_cast<std::size_t>(p1);
        const auto j = static_cast<std::size_t>(p2);
        return 4 * n * n + i * n - i * (i - 1) / 2 + (j - i);
    }
    const auto t = static_cast<std::size_t>(cell.temporal);
    return t * n * n + static_cast<std::size_t>(p1) * n + static_cast<std::size_t>(p2);
}

long CellGraphDictionary::closed_form_count(int n_s, int n_asymmetric, int n_symmetric) {
    return static_cast<long>(n_s) * n_s * n_asymmetric + static_cast<long>(n_s) * n_symmetric;
}

FeatureVector featurize(const QstGraph& graph, const CellGraphDictionary& dict) {
    FeatureVector counts(dict.size(), 0);
    for (const CellGraph& cell : graph.cells) {
        ++counts[dict.index_of(cell)];
    }
    return counts;
}

std::vector<double> to_doubles(const FeatureVector& v) {
    return {v.begin(), v.end()};
}

FeatureVector hierarchical_features(const ScopeEpisodes& episodes, const Window& window,
                                    const CellGraphDictionary& dict,
                                    std::span<const Scope> scopes) {
    FeatureVector out;
    out.reserve(scopes.size() * dict.size());
    for (Scope scope : scopes) {
        const QstGraph graph = build_qst_graph(window, episodes.for_scope(scope), scope);
        const FeatureVector block = featurize(graph, dict);
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

double bocg_kernel(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw Error("kernel", "feature vector length mismatch");
    }
    return kernels::dot(u, v);
}

double bocg_kernel(const FeatureVector& u, const FeatureVector& v) {
    const std::vector<double> du = to_doubles(u);
    const std::vector<double> dv = to_doubles(v);
    return bocg_kernel(std::span<const double>(du), std::span<const double>(dv));
}

}  // namespace qstr
