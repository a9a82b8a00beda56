#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qstr/graph.hpp"

namespace qstr {

enum class NormMode : std::uint8_t {
    Counts,  // cluster raw histogram counts
    L1,      // normalize each vector to sum 1 before distances
};

std::string_view norm_mode_name(NormMode m);
NormMode norm_mode_from_name(std::string_view name);

/// K-means codebook over window feature vectors.
struct Codebook {
    int k = 0;
    NormMode norm_mode = NormMode::Counts;
    std::uint64_t seed = 0;
    std::size_t feature_length = 0;
    std::vector<std::vector<double>> centroids;
};

/// Remove exact duplicates, keeping first occurrences in order.
/// Throws qstr::Error("vocab") on empty input.
std::vector<FeatureVector> collect_distinct(std::span<const FeatureVector> vectors);

struct KMeansParams {
    int max_iter = 100;
    double tol = 1e-6;  // max centroid shift (L2) that counts as converged
};

struct KMeansTrace {
    std::vector<double> inertia;  // after each assignment step
};

/// Seeded k-means++ initialization followed by Lloyd iterations on Euclidean
/// distance; empty clusters are reseeded to the point farthest from its
/// centroid. Deterministic for fixed inputs and seed.
/// Throws qstr::Error("vocab") when k exceeds the number of vectors.
Codebook kmeans_fit(std::span<const FeatureVector> distinct_vectors, int k, std::uint64_t seed,
                    NormMode norm_mode = NormMode::Counts, const KMeansParams& params = {},
                    KMeansTrace* trace = nullptr);

/// Nearest centroid by Euclidean distance; ties go to the lowest index.
/// Throws qstr::Error("vocab") on a length mismatch.
int assign_word(const FeatureVector& v, const Codebook& cb);
int assign_word(std::span<const double> v, const Codebook& cb);

/// The normalization applied before distance computations.
std::vector<double> prepare_vector(const FeatureVector& v, NormMode mode);

}  // namespace qstr
