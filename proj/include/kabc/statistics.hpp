#pragma once

#include <cstddef>

#include "kabc/environment.hpp"
#include "kabc/gram.hpp"
#include "kabc/kernel.hpp"

// Empirical MMD and RKHS variance plus the decision thresholds. The double
// sums keep the diagonal terms (plug-in V-statistics). Quantities that are
// nonnegative in exact arithmetic clamp rounding noise in [-1e-9, 0) to 0
// and treat anything more negative as an internal error.

namespace kabc {

struct PairStatistics {
    double mmd_hat = 0.0;
    double var_hat_i = 0.0;
    double var_hat_j = 0.0;
    std::size_t n = 0;

    bool operator==(const PairStatistics&) const = default;
};

// Per-batch pieces shared by the MMD and variance statistics, so the kernel
// sums are computed once per (pair, iteration).
struct BatchSummary {
    gram::PointsSoA points;
    double self_sum = 0.0;  // full n x n double sum, diagonal included
    double diag_sum = 0.0;  // sum of g(X_t, X_t)
    std::size_t n = 0;
};

BatchSummary summarize_batch(const KernelSpec& kernel, const SampleBatch& batch);

// sqrt( (1/n^2) sum_{s,t} [g(Xi_s,Xi_t) - 2 g(Xi_s,Xj_t) + g(Xj_s,Xj_t)] ).
// Batches must have equal size n >= 1.
double empirical_mmd(const KernelSpec& kernel, const SampleBatch& batch_i,
                     const SampleBatch& batch_j);

// (1/(n-1)) sum_t [ g(X_t,X_t) - (1/n) sum_s g(X_t,X_s) ]; needs n >= 2.
double empirical_variance(const KernelSpec& kernel, const SampleBatch& batch);

// Both statistics for one pair from precomputed summaries (one cross sum).
PairStatistics pair_statistics(const KernelSpec& kernel, const BatchSummary& summary_i,
                               const BatchSummary& summary_j);

// Variance-aware rejection threshold:
// (sqrt(vi) + sqrt(vj)) * sqrt(2 L / n) + (32/3) sqrt(g_tilde) L / n,
// with L = ln(8 (N^2 - N) / delta_prime).
double threshold(std::size_t n, double delta_prime, std::size_t N, double var_hat_i,
                 double var_hat_j, double g_tilde);

// Variance-free alternative: sqrt(g_bar / n) * (sqrt(L) + 2).
double threshold_subgaussian(std::size_t n, double delta_prime, std::size_t N,
                             double g_bar);

// Deviation bound for |mmd_hat - mmd| at confidence delta, stated in terms
// of the true variances. Used by coverage tests, not by the algorithm.
double oracle_deviation_bound(std::size_t n, double delta, double var_star_i,
                              double var_star_j, double g_bar);

}  // namespace kabc
