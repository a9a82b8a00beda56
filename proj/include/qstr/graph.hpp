#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qstr/qualrel.hpp"
#include "qstr/temporal.hpp"
#include "qstr/tracks.hpp"

namespace qstr {

/// Maximal frame interval over which no pair's filtered relation changes.
struct Fragment {
    int index = 0;
    Interval frames;
};

/// A span of consecutive fragments and the frame range it covers.
struct Window {
    int first_fragment = 0;
    int last_fragment = 0;
    Interval frames;

    int fragment_count() const { return last_fragment - first_fragment + 1; }
};

/// Atomic pattern: one temporal relation linking two spatial-relation
/// episodes. Entity identities are intentionally absent.
struct CellGraph {
    SpatialRelation first = SpatialRelation::PO;
    SpatialRelation second = SpatialRelation::PO;
    TemporalRelation temporal = TemporalRelation::Equals;

    friend bool operator==(const CellGraph&, const CellGraph&) = default;
};

/// Rank of a spatial relation in lexicographic name order
/// (D < D1 < ... < D5 < P < PO); fixes the canonical label order.
int spatial_lexical_rank(SpatialRelation r);

struct CanonicalPair {
    Episode first;
    Episode second;
    TemporalRelation relation = TemporalRelation::Equals;
};

/// Orient two distinct episodes canonically: ascending (start, end, PairKey);
/// for Equals the spatial labels are additionally sorted ascending so the
/// unordered pair has one form.
CanonicalPair canonical_pair(const Episode& p, const Episode& q);

/// The cell graph of two canonically oriented episodes.
CellGraph canonical_cell(const Episode& p, const Episode& q);

/// Fragment boundaries = union of all episode start frames across pairs.
/// Throws qstr::Error("fragments") when no episodes are given.
std::vector<Fragment> segment_fragments(std::span<const Episode> episodes, int frame_count);

/// Windows of window_length fragments starting at 0, stride, 2*stride, ...
/// Fewer than window_length fragments total yield one window over all of
/// them. After the full windows, one trailing partial window is emitted at
/// the next stride position if uncovered fragments remain and the partial
/// spans at least 2 fragments; a 1-fragment tail is dropped.
/// Throws qstr::Error("windows") on zero fragments.
std::vector<Window> sliding_windows(std::span<const Fragment> fragments, int window_length,
                                    int stride);

/// Multiset of cell graphs over one window and one body scope.
struct QstGraph {
    Window window;
    Scope scope = Scope::Whole;
    std::vector<CellGraph> cells;
};

/// Clip episodes to the window's frame range (dropping empty clips) and emit
/// one canonical cell graph per unordered pair of distinct clipped episodes.
QstGraph build_qst_graph(const Window& window, std::span<const Episode> episodes, Scope scope);

/// Every canonical cell graph over a spatial alphabet: ordered label pairs
/// for the four asymmetric temporal relations plus unordered pairs for
/// Equals, enumerated temporal-major then label-major in lexical order.
class CellGraphDictionary {
public:
    explicit CellGraphDictionary(std::vector<SpatialRelation> alphabet);

    std::size_t size() const { return entries_.size(); }
    const std::vector<CellGraph>& entries() const { return entries_; }
    int spatial_count() const { return static_cast<int>(alphabet_.size()); }
    const std::vector<SpatialRelation>& alphabet() const { return alphabet_; }

    /// Position of a canonical cell graph; throws qstr::Error("dictionary")
    /// for labels outside the alphabet or a non-canonical Equals pair.
    std::size_t index_of(const CellGraph& cell) const;

    /// The closed-form count n_s^2 * n_at + n_s * n_st. Kept as a documented
    /// reference value: it undercounts the unordered symmetric pairs, so it
    /// differs from size() whenever n_s > 1 (203 vs 224 for the default
    /// 7-relation alphabet).
    static long closed_form_count(int n_s, int n_asymmetric, int n_symmetric);

private:
    std::vector<SpatialRelation> alphabet_;  // sorted by lexical rank
    std::array<int, 8> position_;            // SpatialRelation -> alphabet position or -1
    std::vector<CellGraph> entries_;
};

/// Histogram over the dictionary: counts[j] = multiplicity of entry j.
using FeatureVector = std::vector<std::uint32_t>;

FeatureVector featurize(const QstGraph& graph, const CellGraphDictionary& dict);

std::vector<double> to_doubles(const FeatureVector& v);

/// Episodes of one video grouped by body scope.
struct ScopeEpisodes {
    std::array<std::vector<Episode>, 3> by_scope;  // indexed by Scope
    int frame_count = 0;

    const std::vector<Episode>& for_scope(Scope s) const {
        return by_scope[static_cast<std::size_t>(s)];
    }
};

/// Concatenated per-scope histograms for one window, in the given scope
/// order. Length = scopes.size() * dict.size().
FeatureVector hierarchical_features(const ScopeEpisodes& episodes, const Window& window,
                                    const CellGraphDictionary& dict,
                                    std::span<const Scope> scopes);

/// Linear histogram kernel: sum_k u_k * v_k.
/// Throws qstr::Error("kernel") on length mismatch.
double bocg_kernel(std::span<const double> u, std::span<const double> v);
double bocg_kernel(const FeatureVector& u, const FeatureVector& v);

}  // namespace qstr
