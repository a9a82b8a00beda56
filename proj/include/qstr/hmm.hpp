#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qstr {

/// Discrete hidden Markov model {A, B, pi}. Rows of A and B and the vector
/// pi are stochastic; after training every B entry is at least the smoothing
/// floor used during fitting.
struct DiscreteHmm {
    int n_states = 0;
    int n_symbols = 0;
    std::vector<double> pi;            // n_states
    std::vector<std::vector<double>> a;  // n_states x n_states
    std::vector<std::vector<double>> b;  // n_states x n_symbols
};

using ObservationSequence = std::vector<int>;

/// log P(O | model) via the scaled forward recursion, O(N^2 T).
/// Returns -inf when the model assigns the sequence zero probability.
/// Throws qstr::Error("hmm") on an empty sequence or a symbol >= n_symbols.
double forward_loglik(const DiscreteHmm& model, std::span<const int> symbols);

struct BaumWelchParams {
    int max_iter = 100;
    double tol = 1e-4;       // relative total log-likelihood improvement
    double epsilon = 1e-6;   // emission floor applied after each M-step
    int restarts = 3;        // seeded restarts; best final likelihood kept
};

/// One EM iteration of the best restart: the total log-likelihood of the
/// parameters entering the iteration, and of the M-step output before the
/// emission floor is applied. EM guarantees post_mstep >= entry.
struct FitIteration {
    double entry = 0.0;
    double post_mstep = 0.0;
};

struct FitTrace {
    std::vector<FitIteration> iterations;
    double final_loglik = 0.0;
};

/// Multi-sequence Baum-Welch: pi starts uniform, A and B rows are drawn from
/// a seeded flat Dirichlet; after each maximization step B entries are
/// floored at epsilon and rows renormalized. Deterministic for fixed inputs
/// and seed. Throws qstr::Error("hmm") on an empty training set or symbols
/// outside [0, n_symbols).
DiscreteHmm baum_welch_fit(const std::vector<ObservationSequence>& sequences, int n_states,
                           int n_symbols, std::uint64_t seed, const BaumWelchParams& params = {},
                           FitTrace* trace = nullptr);

struct Classification {
    int label_index = 0;
    std::vector<double> scores;  // per-class log-likelihoods
};

/// argmax over per-class log-likelihoods; ties go to the lowest class index.
/// Throws qstr::Error("hmm") on an empty model list.
Classification classify(std::span<const DiscreteHmm> models, std::span<const int> symbols);

}  // namespace qstr
