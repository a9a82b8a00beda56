#include "qstr/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

#include "qstr/error.hpp"
#include "qstr/kernels.hpp"
#include "qstr/rng.hpp"

namespace qstr {

std::string_view norm_mode_name(NormMode m) {
    return m == NormMode::Counts ? "counts" : "l1";
}

NormMode norm_mode_from_name(std::string_view name) {
    if (name == "counts") return NormMode::Counts;
    if (name == "l1") return NormMode::L1;
    throw Error("vocab", "unknown norm mode: " + std::string(name));
}

std::vector<FeatureVector> collect_distinct(std::span<const FeatureVector> vectors) {
    if (vectors.empty()) {
        throw Error("vocab", "no feature vectors to deduplicate");
    }
    struct Hash {
        std::size_t operator()(const FeatureVector* v) const {
            std::size_t h = v->size();
            for (std::uint32_t x : *v) {
                h = rng::splitmix64(h ^ x);
            }
            return h;
        }
    };
    struct Eq {
        bool operator()(const FeatureVector* a, const FeatureVector* b) const {
            return *a == *b;
        }
    };
    std::unordered_set<const FeatureVector*, Hash, Eq> seen;
    std::vector<FeatureVector> out;
    for (const FeatureVector& v : vectors) {
        if (seen.insert(&v).second) {
            out.push_back(v);
        }
    }
    return out;
}

std::vector<double> prepare_vector(const FeatureVector& v, NormMode mode) {
    std::vector<double> out = to_doubles(v);
    if (mode == NormMode::L1) {
        double total = 0.0;
        for (double x : out) total += x;
        if (total > 0.0) {
            for (double& x : out) x /= total;
        }
    }
    return out;
}

namespace {

int nearest_centroid(std::span<const double> v, const std::vector<std::vector<double>>& centroids) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = kernels::l2sq(v, centroids[c]);
        if (d < best_dist) {
            best_dist = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

}  // namespace

Codebook kmeans_fit(std::span<const FeatureVector> distinct_vectors, int k, std::uint64_t seed,
                    NormMode norm_mode, const KMeansParams& params, KMeansTrace* trace) {
    const std::size_t n = distinct_vectors.size();
    if (n == 0 || k < 1) {
        throw Error("vocab", "kmeans needs at least one vector and k >= 1");
    }
    if (static_cast<std::size_t>(k) > n) {
        throw Error("vocab", "k = " + std::to_string(k) + " exceeds the " + std::to_string(n) +
                                 " distinct feature vectors; lower k or enrich the data");
    }
    const std::size_t dim = distinct_vectors.front().size();
    std::vector<std::vector<double>> points;
    points.reserve(n);
    for (const FeatureVector& v : distinct_vectors) {
        if (v.size() != dim) {
            throw Error("vocab", "inconsistent feature vector lengths");
        }
        points.push_back(prepare_vector(v, norm_mode));
    }

    std::mt19937_64 gen(seed);
    const auto kk = static_cast<std::size_t>(k);

    // k-means++ seeding.
    std::vector<std::vector<double>> centroids;
    centroids.reserve(kk);
    centroids.push_back(points[rng::index_below(gen, n)]);
    std::vector<double> min_dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        min_dist[i] = kernels::l2sq(points[i], centroids[0]);
    }
    while (centroids.size() < kk) {
        double total = 0.0;
        for (double d : min_dist) total += d;
        std::size_t chosen = 0;
        if (total > 0.0) {
            const double r = rng::unit_double(gen) * total;
            double acc = 0.0;
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += min_dist[i];
                if (r < acc) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = rng::index_below(gen, n);
        }
        centroids.push_back(points[chosen]);
        for (std::size_t i = 0; i < n; ++i) {
            min_dist[i] = std::min(min_dist[i], kernels::l2sq(points[i], centroids.back()));
        }
    }

    std::vector<int> labels(n, 0);
    std::vector<std::size_t> cluster_size(kk, 0);
    for (int iter = 0; iter < params.max_iter; ++iter) {
        // Assignment.
        double inertia = 0.0;
        std::fill(cluster_size.begin(), cluster_size.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = nearest_centroid(points[i], centroids);
            ++cluster_size[static_cast<std::size_t>(labels[i])];
            inertia += kernels::l2sq(points[i], centroids[static_cast<std::size_t>(labels[i])]);
        }
        if (trace) trace->inertia.push_back(inertia);

        // Reseed empty clusters to the farthest point, lowest index on ties.
        for (std::size_t c = 0; c < kk; ++c) {
            if (cluster_size[c] > 0) continue;
            double farthest = -1.0;
            std::size_t pick = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (cluster_size[static_cast<std::size_t>(labels[i])] <= 1) continue;
                const double d =
                    kernels::l2sq(points[i], centroids[static_cast<std::size_t>(labels[i])]);
                if (d > farthest) {
                    farthest = d;
                    pick = i;
                }
            }
            --cluster_size[static_cast<std::size_t>(labels[pick])];
            labels[pick] = static_cast<int>(c);
            cluster_size[c] = 1;
            centroids[c] = points[pick];
        }

        // Update.
        std::vector<std::vector<double>> next(kk, std::vector<double>(dim, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(labels[i]);
            for (std::size_t d = 0; d < dim; ++d) next[c][d] += points[i][d];
        }
        double max_shift = 0.0;
        for (std::size_t c = 0; c < kk; ++c) {
            if (cluster_size[c] == 0) continue;
            const double inv = 1.0 / static_cast<double>(cluster_size[c]);
            for (std::size_t d = 0; d < dim; ++d) next[c][d] *= inv;
            max_shift = std::max(max_shift, std::sqrt(kernels::l2sq(next[c], centroids[c])));
            centroids[c] = std::move(next[c]);
        }
        if (max_shift < params.tol) break;
    }

    Codebook cb;
    cb.k = k;
    cb.norm_mode = norm_mode;
    cb.seed = seed;
    cb.feature_length = dim;
    cb.centroids = std::move(centroids);
    return cb;
}

int assign_word(std::span<const double> v, const Codebook& cb) {
    if (v.size() != cb.feature_length) {
        throw Error("vocab", "feature length " + std::to_string(v.size()) +
                                 " does not match codebook length " +
                                 std::to_string(cb.feature_length));
    }
    return nearest_centroid(v, cb.centroids);
}

int assign_word(const FeatureVector& v, const Codebook& cb) {
    const std::vector<double> prepared = prepare_vector(v, cb.norm_mode);
    return assign_word(std::span<const double>(prepared), cb);
}

}  // namespace qstr
