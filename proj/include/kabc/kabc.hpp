#pragma once

#include <cstdint>
#include <vector>

#include "kabc/clusterer.hpp"
#include "kabc/environment.hpp"

// The adaptive outer loop: doubling per-arm budgets n_k with shrinking
// confidences delta_k until CLUSTER returns exactly K blocks, plus the
// non-adaptive single-shot variant and the budget-bound calculator.

namespace kabc {

struct Schedule {
    std::size_t k = 0;
    double delta_k = 0.0;
    std::size_t n_k = 0;
};

// delta_k = delta / (4 k^2); n_k = ceil(2^k * ln(8 (N^2 - N) / delta_k)).
Schedule schedule(std::size_t k, double delta, std::size_t N);

struct IterationRow {
    std::size_t k = 0;
    std::size_t n_k = 0;
    double delta_k = 0.0;
    std::size_t num_blocks = 0;

    bool operator==(const IterationRow&) const = default;
};

enum class RunOutcome { converged, cap_exceeded };

struct RunReport {
    RunOutcome outcome = RunOutcome::converged;
    std::size_t stopped_at = 0;  // last executed iteration
    std::uint64_t budget = 0;    // every sample drawn, all iterations
    Partition partition = Partition::singletons(1);
    std::vector<IterationRow> per_iteration;
    bool correct = false;  // vs ground truth; always false on cap_exceeded
    std::vector<ClusterTrace> traces;  // only when keep_traces

    bool operator==(const RunReport&) const = default;
};

struct KabcOptions {
    ThresholdMode mode = ThresholdMode::variance_aware;
    std::size_t cap = 40;  // iterations before giving up; distinct outcome
    bool keep_traces = false;
};

// Iteration k derives its sampling seed from (seed, k), so a run is
// reproducible from the root seed alone.
RunReport kabc_run(const Environment& env, double delta, std::size_t K,
                   const KabcOptions& options, std::uint64_t seed);

// Single CLUSTER call at the budget the guarantee prescribes for a known
// signal-to-noise lower bound: n = ceil(128 / s0_squared * ln(8 (N^2-N) / delta)),
// raised to 2 when smaller.
ClusterTrace run_nonadaptive(const Environment& env, double delta, double s0_squared,
                             ThresholdMode mode, std::uint64_t seed);

struct BudgetBound {
    std::size_t k_star = 0;
    double tau_bound = 0.0;
};

// k_star = max(ceil(log2(128 / s_star_squared)), 1);
// tau_bound = 8 N max(128 / s_star_squared, 1) ln(32 (N^2-N) k_star^2 / delta).
BudgetBound budget_bound(std::size_t N, double delta, double s_star_squared);

}  // namespace kabc
