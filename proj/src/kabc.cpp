#include "kabc/kabc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kabc {

namespace {

void check_delta(double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("delta must lie in (0, 1]");
    }
}

std::size_t ceil_to_count(double value, const char* what) {
    double up = std::ceil(value);
    if (!(up >= 0.0) || up > 9.0e15) {
        throw std::invalid_argument(std::string(what) + " overflows the sample count");
    }
    return static_cast<std::size_t>(up);
}

}  // namespace

Schedule schedule(std::size_t k, double delta, std::size_t N) {
    if (k < 1) {
        throw std::invalid_argument("iteration index starts at 1");
    }
    check_delta(delta);
    if (N < 2) {
        throw std::invalid_argument("schedule needs N >= 2");
    }
    Schedule s;
    s.k = k;
    s.delta_k = delta / (4.0 * static_cast<double>(k) * static_cast<double>(k));
    double pairs = static_cast<double>(N) * static_cast<double>(N - 1);
    double raw = std::ldexp(std::log(8.0 * pairs / s.delta_k), static_cast<int>(k));
    s.n_k = ceil_to_count(raw, "n_k");
    return s;
}

RunReport kabc_run(const Environment& env, double delta, std::size_t K,
                   const KabcOptions& options, std::uint64_t seed) {
    check_delta(delta);
    std::size_t num_arms = env.num_arms();
    if (K < 1 || K > num_arms) {
        throw std::invalid_argument("K must lie in [1, N]; got " + std::to_string(K) +
                                    " with N = " + std::to_string(num_arms));
    }
    if (options.cap < 1) {
        throw std::invalid_argument("iteration cap must be at least 1");
    }

    RunReport report;
    for (std::size_t k = 1; k <= options.cap; ++k) {
        Schedule sched = schedule(k, delta, num_arms);
        ClusterTrace trace =
            cluster(env, sched.n_k, sched.delta_k, options.mode, rng::derive(seed, k));
        report.budget += static_cast<std::uint64_t>(num_arms) * sched.n_k;
        report.per_iteration.push_back(
            {k, sched.n_k, sched.delta_k, trace.partition.num_blocks()});
        report.stopped_at = k;
        report.partition = trace.partition;
        if (options.keep_traces) report.traces.push_back(std::move(trace));
        if (report.partition.num_blocks() == K) {
            report.outcome = RunOutcome::converged;
            report.correct = report.partition == env.true_partition();
            return report;
        }
    }
    report.outcome = RunOutcome::cap_exceeded;
    report.correct = false;
    return report;
}

ClusterTrace run_nonadaptive(const Environment& env, double delta, double s0_squared,
                             ThresholdMode mode, std::uint64_t seed) {
    check_delta(delta);
    if (!(s0_squared > 0.0)) {
        throw std::invalid_argument("s0_squared must be positive");
    }
    std::size_t num_arms = env.num_arms();
    double pairs = static_cast<double>(num_arms) * static_cast<double>(num_arms - 1);
    double raw = 128.0 / s0_squared * std::log(8.0 * pairs / delta);
    std::size_t n_star = ceil_to_count(raw, "n_*");
    if (n_star < 2) n_star = 2;
    return cluster(env, n_star, delta, mode, seed);
}

BudgetBound budget_bound(std::size_t N, double delta, double s_star_squared) {
    if (N < 2) {
        throw std::invalid_argument("budget bound needs N >= 2");
    }
    check_delta(delta);
    if (!(s_star_squared > 0.0)) {
        throw std::invalid_argument("s_star_squared must be positive");
    }
    BudgetBound out;
    double hardness = 128.0 / s_star_squared;
    double k_star = std::max(std::ceil(std::log2(hardness)), 1.0);
    out.k_star = static_cast<std::size_t>(k_star);
    double pairs = static_cast<double>(N) * static_cast<double>(N - 1);
    out.tau_bound = 8.0 * static_cast<double>(N) * std::max(hardness, 1.0) *
                    std::log(32.0 * pairs * k_star * k_star / delta);
    return out;
}

}  // namespace kabc
