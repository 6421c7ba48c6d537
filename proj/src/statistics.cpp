#include "kabc/statistics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kabc {

namespace {

double clamp_nonnegative(double value, const char* what) {
    if (value >= 0.0) return value;
    if (value >= -1e-9) return 0.0;
    throw std::runtime_error(std::string(what) + " came out " + std::to_string(value) +
                             ", below the rounding tolerance");
}

void check_batch(const KernelSpec& kernel, const SampleBatch& batch) {
    if (batch.n < 1) {
        throw std::invalid_argument("batch is empty");
    }
    if (batch.d != kernel.dimension) {
        throw std::invalid_argument("batch dimension " + std::to_string(batch.d) +
                                    " does not match kernel dimension " +
                                    std::to_string(kernel.dimension));
    }
    if (batch.points.size() != batch.n * batch.d) {
        throw std::invalid_argument("batch holds " + std::to_string(batch.points.size()) +
                                    " coordinates, expected n*d");
    }
}

double mmd_from_sums(double self_i, double self_j, double cross, std::size_t n) {
    double n_sq = static_cast<double>(n) * static_cast<double>(n);
    double radicand = (self_i + self_j - 2.0 * cross) / n_sq;
    return std::sqrt(clamp_nonnegative(radicand, "squared empirical mmd"));
}

double variance_from_sums(double diag, double self, std::size_t n) {
    double value = (diag - self / static_cast<double>(n)) / static_cast<double>(n - 1);
    return clamp_nonnegative(value, "empirical variance");
}

double union_bound_log(double delta_prime, std::size_t N) {
    if (!(delta_prime > 0.0 && delta_prime <= 1.0)) {
        throw std::invalid_argument("delta_prime must lie in (0, 1]");
    }
    if (N < 2) {
        throw std::invalid_argument("threshold needs N >= 2");
    }
    double pairs = static_cast<double>(N) * static_cast<double>(N - 1);
    return std::log(8.0 * pairs / delta_prime);
}

}  // namespace

BatchSummary summarize_batch(const KernelSpec& kernel, const SampleBatch& batch) {
    check_batch(kernel, batch);
    BatchSummary summary;
    summary.n = batch.n;
    summary.points = gram::PointsSoA::from_row_major(batch.points, batch.n, batch.d);
    summary.self_sum = gram::active().self_sum(kernel.family, kernel.bandwidth, summary.points);
    summary.diag_sum = static_cast<double>(batch.n) * kernel_bounds(kernel).sup;
    return summary;
}

double empirical_mmd(const KernelSpec& kernel, const SampleBatch& batch_i,
                     const SampleBatch& batch_j) {
    check_batch(kernel, batch_i);
    check_batch(kernel, batch_j);
    if (batch_i.n != batch_j.n) {
        throw std::invalid_argument("batches differ in size: " + std::to_string(batch_i.n) +
                                    " vs " + std::to_string(batch_j.n));
    }
    auto points_i = gram::PointsSoA::from_row_major(batch_i.points, batch_i.n, batch_i.d);
    auto points_j = gram::PointsSoA::from_row_major(batch_j.points, batch_j.n, batch_j.d);
    const gram::Kernels& backend = gram::active();
    double self_i = backend.self_sum(kernel.family, kernel.bandwidth, points_i);
    double self_j = backend.self_sum(kernel.family, kernel.bandwidth, points_j);
    double cross = backend.cross_sum(kernel.family, kernel.bandwidth, points_i, points_j);
    return mmd_from_sums(self_i, self_j, cross, batch_i.n);
}

double empirical_variance(const KernelSpec& kernel, const SampleBatch& batch) {
    check_batch(kernel, batch);
    if (batch.n < 2) {
        throw std::invalid_argument("empirical variance needs n >= 2");
    }
    auto points = gram::PointsSoA::from_row_major(batch.points, batch.n, batch.d);
    double self = gram::active().self_sum(kernel.family, kernel.bandwidth, points);
    double diag = static_cast<double>(batch.n) * kernel_bounds(kernel).sup;
    return variance_from_sums(diag, self, batch.n);
}

PairStatistics pair_statistics(const KernelSpec& kernel, const BatchSummary& summary_i,
                               const BatchSummary& summary_j) {
    if (summary_i.n != summary_j.n) {
        throw std::invalid_argument("summaries differ in size: " +
                                    std::to_string(summary_i.n) + " vs " +
                                    std::to_string(summary_j.n));
    }
    if (summary_i.n < 2) {
        throw std::invalid_argument("pair statistics need n >= 2");
    }
    double cross = gram::active().cross_sum(kernel.family, kernel.bandwidth,
                                            summary_i.points, summary_j.points);
    PairStatistics stats;
    stats.n = summary_i.n;
    stats.mmd_hat = mmd_from_sums(summary_i.self_sum, summary_j.self_sum, cross, stats.n);
    stats.var_hat_i = variance_from_sums(summary_i.diag_sum, summary_i.self_sum, summary_i.n);
    stats.var_hat_j = variance_from_sums(summary_j.diag_sum, summary_j.self_sum, summary_j.n);
    return stats;
}

double threshold(std::size_t n, double delta_prime, std::size_t N, double var_hat_i,
                 double var_hat_j, double g_tilde) {
    if (n < 1) {
        throw std::invalid_argument("threshold needs n >= 1");
    }
    if (!(var_hat_i >= 0.0) || !(var_hat_j >= 0.0)) {
        throw std::invalid_argument("variance estimates must be nonnegative");
    }
    if (!(g_tilde >= 0.0)) {
        throw std::invalid_argument("g_tilde must be nonnegative");
    }
    double big_l = union_bound_log(delta_prime, N);
    double nn = static_cast<double>(n);
    return (std::sqrt(var_hat_i) + std::sqrt(var_hat_j)) * std::sqrt(2.0 * big_l / nn) +
           (32.0 / 3.0) * std::sqrt(g_tilde) * big_l / nn;
}

double threshold_subgaussian(std::size_t n, double delta_prime, std::size_t N,
                             double g_bar) {
    if (n < 1) {
        throw std::invalid_argument("threshold needs n >= 1");
    }
    if (!(g_bar >= 0.0)) {
        throw std::invalid_argument("g_bar must be nonnegative");
    }
    double big_l = union_bound_log(delta_prime, N);
    return std::sqrt(g_bar / static_cast<double>(n)) * (std::sqrt(big_l) + 2.0);
}

double oracle_deviation_bound(std::size_t n, double delta, double var_star_i,
                              double var_star_j, double g_bar) {
    if (n < 1) {
        throw std::invalid_argument("deviation bound needs n >= 1");
    }
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("delta must lie in (0, 1]");
    }
    if (!(var_star_i >= 0.0) || !(var_star_j >= 0.0) || !(g_bar >= 0.0)) {
        throw std::invalid_argument("variances and g_bar must be nonnegative");
    }
    double log_term = std::log(4.0 / delta);
    double nn = static_cast<double>(n);
    return (std::sqrt(var_star_i) + std::sqrt(var_star_j)) * std::sqrt(2.0 * log_term / nn) +
           (8.0 / 3.0) * std::sqrt(g_bar) * log_term / nn;
}

}  // namespace kabc
