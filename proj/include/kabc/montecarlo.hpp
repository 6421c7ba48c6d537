#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kabc/config.hpp"
#include "kabc/kabc.hpp"

// Monte Carlo driver: repeated independent runs with seeds derived from the
// config's root seed, aggregated into error rates and budget quantiles.
// Reports serialize to CSV (one row per trial plus a summary block) or to a
// structured JSON document that parses back losslessly.

namespace kabc {

struct TrialDigest {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    RunOutcome outcome = RunOutcome::converged;
    std::size_t stopped_at = 0;
    std::uint64_t budget = 0;
    Partition partition;
    bool correct = false;
    std::vector<IterationRow> per_iteration;

    bool operator==(const TrialDigest&) const = default;
};

struct BudgetQuantiles {
    std::uint64_t min = 0;
    std::uint64_t max = 0;
    double median = 0.0;
    double p90 = 0.0;  // smallest budget covering at least 90% of trials

    bool operator==(const BudgetQuantiles&) const = default;
};

// Oracle context for the run: the instance's signal-to-noise ratio and the
// budget bound it implies. Absent when the truth has a single block.
struct SnrSummary {
    double s_star_squared = 0.0;
    double std_error = 0.0;
    bool exact = true;
    std::size_t k_star = 0;
    double tau_bound = 0.0;
    double within_bound_fraction = 0.0;

    bool operator==(const SnrSummary&) const = default;
};

struct MonteCarloReport {
    std::size_t trials = 0;
    std::size_t error_count = 0;  // converged on a wrong partition
    std::size_t cap_exceeded_count = 0;
    double error_rate = 0.0;
    BudgetQuantiles budgets;
    std::optional<SnrSummary> snr;
    std::vector<TrialDigest> digests;

    bool operator==(const MonteCarloReport&) const = default;
};

// Executes config.trials independent runs (trial t seeds from (seed, t)),
// spread over the given worker threads. Deterministic for a fixed config
// regardless of the worker count.
MonteCarloReport run_trials(const ExperimentConfig& config, std::size_t workers = 1);

enum class ReportFormat { csv, structured };

std::string emit_report(const MonteCarloReport& report, ReportFormat format);

// Inverse of emit_report(report, structured). Throws std::runtime_error on
// malformed documents.
MonteCarloReport parse_structured_report(const std::string& text);

}  // namespace kabc
