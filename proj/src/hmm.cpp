#include "qstr/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qstr/error.hpp"
#include "qstr/rng.hpp"

namespace qstr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_sequence(const DiscreteHmm& model, std::span<const int> symbols) {
    if (symbols.empty()) {
        throw Error("hmm", "empty observation sequence");
    }
    for (int s : symbols) {
        if (s < 0 || s >= model.n_symbols) {
            throw Error("hmm", "symbol " + std::to_string(s) + " outside [0, " +
                                   std::to_string(model.n_symbols) + ")");
        }
    }
}

struct ForwardResult {
    double loglik = 0.0;
    // alpha[t][i] scaled so each row sums to 1; scale[t] is the row sum
    // before normalization.
    std::vector<std::vector<double>> alpha;
    std::vector<double> scale;
};

ForwardResult scaled_forward(const DiscreteHmm& m, std::span<const int> o, bool keep_alpha) {
    const auto n = static_cast<std::size_t>(m.n_states);
    const std::size_t t_len = o.size();

    ForwardResult res;
    if (keep_alpha) res.alpha.assign(t_len, std::vector<double>(n, 0.0));
    res.scale.assign(t_len, 0.0);

    std::vector<double> prev(n), cur(n);
    for (std::size_t i = 0; i < n; ++i) {
        prev[i] = m.pi[i] * m.b[i][static_cast<std::size_t>(o[0])];
    }
    double loglik = 0.0;
    for (std::size_t t = 0;; ++t) {
        double scale = 0.0;
        for (double v : prev) scale += v;
        if (scale <= 0.0) {
            res.loglik = kNegInf;
            return res;
        }
        const double inv = 1.0 / scale;
        for (double& v : prev) v *= inv;
        loglik += std::log(scale);
        res.scale[t] = scale;
        if (keep_alpha) res.alpha[t] = prev;
        if (t + 1 == t_len) break;

        const auto sym = static_cast<std::size_t>(o[t + 1]);
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += prev[i] * m.a[i][j];
            }
            cur[j] = acc * m.b[j][sym];
        }
        std::swap(prev, cur);
    }
    res.loglik = loglik;
    return res;
}

void normalize_row(std::vector<double>& row) {
    double total = 0.0;
    for (double v : row) total += v;
    if (total > 0.0) {
        for (double& v : row) v /= total;
    } else {
        std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
    }
}

std::vector<double> dirichlet_row(std::mt19937_64& gen, std::size_t n) {
    std::vector<double> row(n);
    for (double& v : row) {
        // flat Dirichlet via normalized exponentials; tiny floor keeps every
        // entry strictly positive
        v = -std::log(1.0 - rng::unit_double(gen)) + 1e-12;
    }
    normalize_row(row);
    return row;
}

DiscreteHmm random_init(int n_states, int n_symbols, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(n_states);
    const auto msz = static_cast<std::size_t>(n_symbols);
    std::mt19937_64 gen(seed);

    DiscreteHmm m;
    m.n_states = n_states;
    m.n_symbols = n_symbols;
    m.pi.assign(n, 1.0 / static_cast<double>(n));
    m.a.reserve(n);
    m.b.reserve(n);
    for (std::size_t i = 0; i < n; ++i) m.a.push_back(dirichlet_row(gen, n));
    for (std::size_t i = 0; i < n; ++i) m.b.push_back(dirichlet_row(gen, msz));
    return m;
}

double total_loglik(const DiscreteHmm& m, const std::vector<ObservationSequence>& seqs) {
    double total = 0.0;
    for (const auto& s : seqs) {
        total += scaled_forward(m, s, /*keep_alpha=*/false).loglik;
    }
    return total;
}

void floor_emissions(DiscreteHmm& m, double epsilon) {
    for (auto& row : m.b) {
        for (double& v : row) v = std::max(v, epsilon);
        normalize_row(row);
    }
}

DiscreteHmm fit_once(const std::vector<ObservationSequence>& sequences, int n_states,
                     int n_symbols, std::uint64_t seed, const BaumWelchParams& params,
                     FitTrace* trace) {
    const auto n = static_cast<std::size_t>(n_states);
    const auto msz = static_cast<std::size_t>(n_symbols);

    DiscreteHmm model = random_init(n_states, n_symbols, seed);
    floor_emissions(model, params.epsilon);

    double prev_ll = kNegInf;
    for (int iter = 0; iter < params.max_iter; ++iter) {
        std::vector<double> pi_acc(n, 0.0);
        std::vector<std::vector<double>> a_num(n, std::vector<double>(n, 0.0));
        std::vector<double> a_den(n, 0.0);
        std::vector<std::vector<double>> b_num(n, std::vector<double>(msz, 0.0));
        std::vector<double> b_den(n, 0.0);
        double ll_entry = 0.0;

        for (const ObservationSequence& o : sequences) {
            const std::size_t t_len = o.size();
            const ForwardResult fwd = scaled_forward(model, o, /*keep_alpha=*/true);
            if (!std::isfinite(fwd.loglik)) {
                throw Error("hmm", "training sequence has zero probability under the model");
            }
            ll_entry += fwd.loglik;

            // Backward pass with the forward scaling factors.
            std::vector<std::vector<double>> beta(t_len, std::vector<double>(n, 0.0));
            std::fill(beta[t_len - 1].begin(), beta[t_len - 1].end(), 1.0);
            for (std::size_t t = t_len - 1; t-- > 0;) {
                const auto sym = static_cast<std::size_t>(o[t + 1]);
                const double inv_scale = 1.0 / fwd.scale[t + 1];
                for (std::size_t i = 0; i < n; ++i) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < n; ++j) {
                        acc += model.a[i][j] * model.b[j][sym] * beta[t + 1][j];
                    }
                    beta[t][i] = acc * inv_scale;
                }
            }

            // gamma_t(i) = alpha_t(i) beta_t(i); rows sum to 1 under this
            // scaling.
            for (std::size_t t = 0; t < t_len; ++t) {
                const auto sym = static_cast<std::size_t>(o[t]);
                for (std::size_t i = 0; i < n; ++i) {
                    const double g = fwd.alpha[t][i] * beta[t][i];
                    if (t == 0) pi_acc[i] += g;
                    b_num[i][sym] += g;
                    b_den[i] += g;
                    if (t + 1 < t_len) a_den[i] += g;
                }
            }
            for (std::size_t t = 0; t + 1 < t_len; ++t) {
                const auto sym = static_cast<std::size_t>(o[t + 1]);
                const double inv_scale = 1.0 / fwd.scale[t + 1];
                for (std::size_t i = 0; i < n; ++i) {
                    const double base = fwd.alpha[t][i] * inv_scale;
                    for (std::size_t j = 0; j < n; ++j) {
                        a_num[i][j] += base * model.a[i][j] * model.b[j][sym] * beta[t + 1][j];
                    }
                }
            }
        }

        // Maximization. Rows with zero occupancy keep their previous values.
        for (std::size_t i = 0; i < n; ++i) {
            model.pi[i] = pi_acc[i] / static_cast<double>(sequences.size());
            if (a_den[i] > 0.0) {
                for (std::size_t j = 0; j < n; ++j) model.a[i][j] = a_num[i][j] / a_den[i];
            }
            if (b_den[i] > 0.0) {
                for (std::size_t k = 0; k < msz; ++k) model.b[i][k] = b_num[i][k] / b_den[i];
            }
        }

        if (trace) {
            trace->iterations.push_back({ll_entry, total_loglik(model, sequences)});
        }
        floor_emissions(model, params.epsilon);

        if (std::isfinite(prev_ll)) {
            const double rel = (ll_entry - prev_ll) / std::max(1.0, std::abs(prev_ll));
            if (rel < params.tol) break;
        }
        prev_ll = ll_entry;
    }
    return model;
}

}  // namespace

double forward_loglik(const DiscreteHmm& model, std::span<const int> symbols) {
    check_sequence(model, symbols);
    return scaled_forward(model, symbols, /*keep_alpha=*/false).loglik;
}

DiscreteHmm baum_welch_fit(const std::vector<ObservationSequence>& sequences, int n_states,
                           int n_symbols, std::uint64_t seed, const BaumWelchParams& params,
                           FitTrace* trace) {
    if (sequences.empty()) {
        throw Error("hmm", "no training sequences");
    }
    if (n_states < 1) {
        throw Error("hmm", "n_states must be >= 1");
    }
    for (const auto& s : sequences) {
        if (s.empty()) {
            throw Error("hmm", "empty observation sequence in training set");
        }
        for (int sym : s) {
            if (sym < 0 || sym >= n_symbols) {
                throw Error("hmm", "training symbol " + std::to_string(sym) + " outside [0, " +
                                       std::to_string(n_symbols) + ")");
            }
        }
    }

    DiscreteHmm best;
    FitTrace best_trace;
    double best_ll = kNegInf;
    const int restarts = std::max(1, params.restarts);
    for (int r = 0; r < restarts; ++r) {
        FitTrace t;
        DiscreteHmm m = fit_once(sequences, n_states, n_symbols,
                                 rng::derive_seed({seed, static_cast<std::uint64_t>(r)}), params,
                                 &t);
        t.final_loglik = total_loglik(m, sequences);
        if (t.final_loglik > best_ll) {
            best_ll = t.final_loglik;
            best = std::move(m);
            best_trace = std::move(t);
        }
    }
    if (trace) *trace = std::move(best_trace);
    return best;
}

Classification classify(std::span<const DiscreteHmm> models, std::span<const int> symbols) {
    if (models.empty()) {
        throw Error("hmm", "no class models");
    }
    Classification out;
    out.scores.reserve(models.size());
    for (const DiscreteHmm& m : models) {
        out.scores.push_back(forward_loglik(m, symbols));
    }
    out.label_index = static_cast<int>(
        std::max_element(out.scores.begin(), out.scores.end()) - out.scores.begin());
    return out;
}

}  // namespace qstr
