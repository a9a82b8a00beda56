#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "qstr/error.hpp"
#include "qstr/graph.hpp"
#include "qstr/rng.hpp"
#include "qstr/synth.hpp"

using namespace qstr;

namespace {

Episode ep(const PairKey& pk, SpatialRelation r, int s, int e) {
    return {pk, r, {s, e}};
}

PairKey pair_a() { return testutil::test_pair(); }
PairKey pair_b() {
    return {EntityRef::make_joint(Joint::Head), EntityRef::make_joint(Joint::Torso)};
}

std::vector<Fragment> make_fragments(int count) {
    std::vector<Fragment> out;
    for (int i = 0; i < count; ++i) {
        out.push_back({i, {i * 10, i * 10 + 9}});
    }
    return out;
}

}  // namespace

TEST_CASE("segment_fragments from episode boundaries") {
    SUBCASE("all pairs constant -> one fragment") {
        const std::vector<Episode> eps = {ep(pair_a(), SpatialRelation::PO, 0, 29),
                                          ep(pair_b(), SpatialRelation::D1, 0, 29)};
        const auto frags = segment_fragments(eps, 30);
        REQUIRE(frags.size() == 1);
        CHECK(frags[0].frames == Interval{0, 29});
    }

    SUBCASE("coincident boundaries deduplicate") {
        const std::vector<Episode> eps = {
            ep(pair_a(), SpatialRelation::PO, 0, 9), ep(pair_a(), SpatialRelation::P, 10, 29),
            ep(pair_b(), SpatialRelation::D1, 0, 9), ep(pair_b(), SpatialRelation::D2, 10, 29)};
        const auto frags = segment_fragments(eps, 30);
        REQUIRE(frags.size() == 2);
        CHECK(frags[0].frames == Interval{0, 9});
        CHECK(frags[1].frames == Interval{10, 29});
    }

    SUBCASE("staggered boundaries") {
        const std::vector<Episode> eps = {
            ep(pair_a(), SpatialRelation::PO, 0, 9), ep(pair_a(), SpatialRelation::P, 10, 29),
            ep(pair_b(), SpatialRelation::D1, 0, 19), ep(pair_b(), SpatialRelation::D2, 20, 29)};
        const auto frags = segment_fragments(eps, 30);
        REQUIRE(frags.size() == 3);
        CHECK(frags[0].frames == Interval{0, 9});
        CHECK(frags[1].frames == Interval{10, 19});
        CHECK(frags[2].frames == Interval{20, 29});
        for (int i = 0; i < 3; ++i) CHECK(frags[static_cast<std::size_t>(i)].index == i);
    }

    SUBCASE("no episodes is an error") {
        CHECK_THROWS_AS(segment_fragments({}, 10), Error);
    }
}

TEST_CASE("sliding_windows") {
    SUBCASE("6 fragments, length 4, stride 1 -> 3 full windows") {
        const auto w = sliding_windows(make_fragments(6), 4, 1);
        REQUIRE(w.size() == 3);
        CHECK(w[0].first_fragment == 0);
        CHECK(w[0].last_fragment == 3);
        CHECK(w[1].first_fragment == 1);
        CHECK(w[1].last_fragment == 4);
        CHECK(w[2].first_fragment == 2);
        CHECK(w[2].last_fragment == 5);
        CHECK(w[0].frames == Interval{0, 39});
    }

    SUBCASE("fewer fragments than the window -> one window over all") {
        const auto w = sliding_windows(make_fragments(3), 4, 1);
        REQUIRE(w.size() == 1);
        CHECK(w[0].first_fragment == 0);
        CHECK(w[0].last_fragment == 2);

        const auto single = sliding_windows(make_fragments(1), 4, 1);
        REQUIRE(single.size() == 1);
        CHECK(single[0].fragment_count() == 1);
    }

    SUBCASE("6 fragments, stride 2 -> 2 windows") {
        const auto w = sliding_windows(make_fragments(6), 4, 2);
        REQUIRE(w.size() == 2);
        CHECK(w[0].first_fragment == 0);
        CHECK(w[1].first_fragment == 2);
    }

    SUBCASE("trailing partial of >= 2 fragments is emitted") {
        const auto w = sliding_windows(make_fragments(7), 4, 2);
        REQUIRE(w.size() == 3);
        CHECK(w[2].first_fragment == 4);
        CHECK(w[2].last_fragment == 6);
    }

    SUBCASE("a 1-fragment tail is dropped") {
        const auto w = sliding_windows(make_fragments(5), 4, 4);
        REQUIRE(w.size() == 1);
        CHECK(w[0].last_fragment == 3);
    }

    SUBCASE("zero fragments is an error") {
        CHECK_THROWS_AS(sliding_windows({}, 4, 1), Error);
    }

    SUBCASE("full-window count formula") {
        std::mt19937_64 gen(41);
        for (int rep = 0; rep < 300; ++rep) {
            const int f = 2 + static_cast<int>(rng::index_below(gen, 30));
            const int lw = 2 + static_cast<int>(rng::index_below(gen, 8));
            const int ls = 1 + static_cast<int>(rng::index_below(gen, 5));
            if (f < lw) continue;
            const auto w = sliding_windows(make_fragments(f), lw, ls);
            int full = 0;
            for (const Window& win : w) {
                if (win.fragment_count() == lw) ++full;
            }
            CHECK(full == (f - lw) / ls + 1);
        }
    }
}

TEST_CASE("build_qst_graph") {
    const Window window{0, 1, {0, 9}};

    SUBCASE("two episodes give one cell") {
        const std::vector<Episode> eps = {ep(pair_a(), SpatialRelation::D1, 0, 4),
                                          ep(pair_a(), SpatialRelation::PO, 5, 9)};
        const QstGraph g = build_qst_graph(window, eps, Scope::Whole);
        REQUIRE(g.cells.size() == 1);
        CHECK(g.cells[0] == CellGraph{SpatialRelation::D1, SpatialRelation::PO,
                                      TemporalRelation::Meets});
    }

    SUBCASE("cell count is C(E,2)") {
        std::mt19937_64 gen(43);
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<Episode> eps;
            const int n = static_cast<int>(rng::index_below(gen, 12));
            for (int i = 0; i < n; ++i) {
                const int s = static_cast<int>(rng::index_below(gen, 10));
                eps.push_back(ep(rng::index_below(gen, 2) ? pair_a() : pair_b(),
                                 SpatialRelation::D2, s,
                                 s + static_cast<int>(rng::index_below(gen, 10))));
            }
            const QstGraph g = build_qst_graph({0, 0, {0, 19}}, eps, Scope::Whole);
            const std::size_t e = eps.size();  // every episode intersects [0,19]
            CHECK(g.cells.size() == e * (e - 1) / 2);
        }
    }

    SUBCASE("episodes outside the window are discarded, partial clips kept") {
        const std::vector<Episode> eps = {ep(pair_a(), SpatialRelation::D1, 0, 100),
                                          ep(pair_b(), SpatialRelation::PO, 50, 100)};
        const QstGraph g = build_qst_graph({0, 0, {10, 20}}, eps, Scope::Whole);
        REQUIRE(g.cells.size() == 0);  // second episode clips away

        const QstGraph g2 = build_qst_graph({0, 0, {40, 60}}, eps, Scope::Whole);
        REQUIRE(g2.cells.size() == 1);
        // clipped intervals: [40,60] and [50,60]: shared end -> SDF
        CHECK(g2.cells[0].temporal == TemporalRelation::SDF);
    }

    SUBCASE("at most one episode -> empty multiset") {
        const std::vector<Episode> eps = {ep(pair_a(), SpatialRelation::D1, 0, 9)};
        CHECK(build_qst_graph(window, eps, Scope::Whole).cells.empty());
    }
}

TEST_CASE("cell graph dictionary enumeration") {
    const CellGraphDictionary full(full_spatial_alphabet());
    CHECK(full.size() == 224);  // 7*7*4 + 28
    CHECK(full.spatial_count() == 7);

    const CellGraphDictionary tiny({SpatialRelation::PO});
    CHECK(tiny.size() == 5);  // 1*1*4 + 1

    const CellGraphDictionary ndr(distance_only_alphabet());
    CHECK(ndr.size() == 42);  // 3*3*4 + 6

    SUBCASE("closed-form reference count differs by the unordered pairs") {
        CHECK(CellGraphDictionary::closed_form_count(7, 4, 1) == 203);
        CHECK(CellGraphDictionary::closed_form_count(7, 4, 1) !=
              static_cast<long>(full.size()));
        CHECK(static_cast<long>(full.size()) -
                  CellGraphDictionary::closed_form_count(7, 4, 1) ==
              21);  // C(7,2) extra unordered Equals pairs
        CHECK(CellGraphDictionary::closed_form_count(1, 4, 1) == 5);
    }

    SUBCASE("entries index back to their position") {
        for (std::size_t i = 0; i < full.size(); ++i) {
            CHECK(full.index_of(full.entries()[i]) == i);
        }
        std::set<std::size_t> seen;
        for (const CellGraph& cell : full.entries()) {
            seen.insert(full.index_of(cell));
        }
        CHECK(seen.size() == full.size());
    }

    SUBCASE("every generated canonical cell indexes") {
        std::mt19937_64 gen(47);
        static const SpatialRelation rels[] = {SpatialRelation::PO, SpatialRelation::P,
                                               SpatialRelation::D1, SpatialRelation::D2,
                                               SpatialRelation::D3, SpatialRelation::D4,
                                               SpatialRelation::D5};
        for (int rep = 0; rep < 2000; ++rep) {
            const auto make = [&] {
                const int s = static_cast<int>(rng::index_below(gen, 12));
                return ep(rng::index_below(gen, 2) ? pair_a() : pair_b(),
                          rels[rng::index_below(gen, 7)], s,
                          s + static_cast<int>(rng::index_below(gen, 12)));
            };
            Episode p = make();
            Episode q = make();
            if (p.span == q.span && p.pair == q.pair && p.relation == q.relation) continue;
            CHECK_NOTHROW(full.index_of(canonical_cell(p, q)));
        }
    }

    SUBCASE("labels outside the alphabet are rejected") {
        CHECK_THROWS_AS(
            ndr.index_of(CellGraph{SpatialRelation::D1, SpatialRelation::PO,
                                   TemporalRelation::Meets}),
            Error);
        CHECK_THROWS_AS(
            full.index_of(CellGraph{SpatialRelation::PO, SpatialRelation::D1,
                                    TemporalRelation::Equals}),  // non-canonical order
            Error);
    }
}

TEST_CASE("featurize") {
    const CellGraphDictionary dict(full_spatial_alphabet());
    QstGraph g{{0, 0, {0, 9}}, Scope::Whole, {}};

    SUBCASE("empty graph -> zero vector") {
        const FeatureVector v = featurize(g, dict);
        CHECK(v.size() == dict.size());
        CHECK(std::count(v.begin(), v.end(), 0u) == static_cast<long>(dict.size()));
    }

    SUBCASE("multiplicities count") {
        const CellGraph cell{SpatialRelation::D1, SpatialRelation::PO, TemporalRelation::Meets};
        g.cells = {cell, cell, cell};
        const FeatureVector v = featurize(g, dict);
        CHECK(v[dict.index_of(cell)] == 3);
        std::uint64_t total = 0;
        for (std::uint32_t c : v) total += c;
        CHECK(total == 3);
    }

    SUBCASE("histogram mass equals cell count on random graphs") {
        std::mt19937_64 gen(53);
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<Episode> eps;
            const int n = 2 + static_cast<int>(rng::index_below(gen, 10));
            for (int i = 0; i < n; ++i) {
                const int s = static_cast<int>(rng::index_below(gen, 15));
                eps.push_back(ep(rng::index_below(gen, 2) ? pair_a() : pair_b(),
                                 full_spatial_alphabet()[rng::index_below(gen, 7)], s,
                                 s + static_cast<int>(rng::index_below(gen, 10))));
            }
            const QstGraph graph = build_qst_graph({0, 0, {0, 30}}, eps, Scope::Whole);
            const FeatureVector v = featurize(graph, dict);
            std::uint64_t total = 0;
            for (std::uint32_t c : v) total += c;
            CHECK(total == graph.cells.size());
        }
    }

    SUBCASE("episode enumeration order does not matter") {
        std::mt19937_64 gen(59);
        std::vector<Episode> eps;
        for (int i = 0; i < 8; ++i) {
            const int s = static_cast<int>(rng::index_below(gen, 15));
            eps.push_back(ep(rng::index_below(gen, 2) ? pair_a() : pair_b(),
                             full_spatial_alphabet()[rng::index_below(gen, 7)], s,
                             s + static_cast<int>(rng::index_below(gen, 10))));
        }
        const Window w{0, 0, {0, 30}};
        const FeatureVector before = featurize(build_qst_graph(w, eps, Scope::Whole), dict);
        for (int rep = 0; rep < 10; ++rep) {
            std::shuffle(eps.begin(), eps.end(), gen);
            CHECK(featurize(build_qst_graph(w, eps, Scope::Whole), dict) == before);
        }
    }
}

TEST_CASE("no pair's filtered relation changes inside a fragment") {
    const Dataset dataset = synth::generate(synth::desk_benchmark_spec(), 9);
    const QualConfig cfg;
    const ScaleTable scales = ScaleTable::defaults();
    int fragments_checked = 0;
    for (std::size_t v = 0; v < dataset.videos.size(); v += 7) {
        const TrackedVideo& video = dataset.videos[v];
        const BodyMetrics metrics = video_body_metrics(video);
        std::vector<RelationSeries> filtered;
        std::vector<Episode> episodes;
        for (const RelationSeries& s :
             relation_series(video, Scope::Whole, cfg, scales, metrics)) {
            filtered.push_back(dwell_filter(s, cfg));
            const auto eps = compress_episodes(filtered.back());
            episodes.insert(episodes.end(), eps.begin(), eps.end());
        }
        const auto fragments = segment_fragments(episodes, video.frame_count());
        CHECK(fragments.front().frames.start == 0);
        CHECK(fragments.back().frames.end == video.frame_count() - 1);
        for (const Fragment& frag : fragments) {
            ++fragments_checked;
            for (const RelationSeries& s : filtered) {
                for (int t = frag.frames.start; t <= frag.frames.end; ++t) {
                    CHECK(s.relations[static_cast<std::size_t>(t)] ==
                          s.relations[static_cast<std::size_t>(frag.frames.start)]);
                }
            }
        }
    }
    CHECK(fragments_checked > 10);
}

TEST_CASE("bocg kernel") {
    SUBCASE("hand-computed dot product") {
        CHECK(bocg_kernel(FeatureVector{1, 2, 0}, FeatureVector{0, 1, 3}) ==
              doctest::Approx(2.0));
    }
    SUBCASE("zero vector annihilates") {
        CHECK(bocg_kernel(FeatureVector{0, 0, 0}, FeatureVector{5, 6, 7}) == 0.0);
    }
    SUBCASE("self kernel is the squared norm") {
        const FeatureVector u{1, 2, 3};
        CHECK(bocg_kernel(u, u) == doctest::Approx(1.0 + 4.0 + 9.0));
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(bocg_kernel(FeatureVector{1}, FeatureVector{1, 2}), Error);
    }
}

TEST_CASE("hierarchical features concatenate scope blocks in order") {
    const CellGraphDictionary dict(full_spatial_alphabet());
    ScopeEpisodes episodes;
    episodes.frame_count = 10;
    episodes.by_scope[static_cast<std::size_t>(Scope::Whole)] = {
        ep(pair_a(), SpatialRelation::D1, 0, 4), ep(pair_a(), SpatialRelation::PO, 5, 9)};
    episodes.by_scope[static_cast<std::size_t>(Scope::Upper)] = {
        ep(pair_b(), SpatialRelation::P, 0, 9)};
    // lower scope left empty

    const Window w{0, 0, {0, 9}};
    const std::vector<Scope> scopes = {Scope::Whole, Scope::Upper, Scope::Lower};
    const FeatureVector v = hierarchical_features(episodes, w, dict, scopes);
    REQUIRE(v.size() == 3 * dict.size());

    const auto idx = dict.index_of(
        CellGraph{SpatialRelation::D1, SpatialRelation::PO, TemporalRelation::Meets});
    CHECK(v[idx] == 1);  // whole block
    std::uint64_t upper_mass = 0;
    std::uint64_t lower_mass = 0;
    for (std::size_t i = 0; i < dict.size(); ++i) {
        upper_mass += v[dict.size() + i];
        lower_mass += v[2 * dict.size() + i];
    }
    CHECK(upper_mass == 0);  // single episode: no pairs
    CHECK(lower_mass == 0);
}
