#include "kabc/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace kabc {

namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest decimal form that parses back to the same double.
std::string format_double(double value) {
    char buffer[32];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) throw std::runtime_error("double formatting failed");
    return std::string(buffer, end);
}

TrialDigest run_single_trial(const Environment& env, const ExperimentConfig& config,
                             std::size_t K, std::size_t trial) {
    TrialDigest digest;
    digest.trial = trial;
    digest.seed = rng::derive(config.seed, trial);
    if (config.variant == Variant::adaptive) {
        KabcOptions options;
        options.mode = config.mode;
        options.cap = config.cap;
        RunReport report = kabc_run(env, config.delta, K, options, digest.seed);
        digest.outcome = report.outcome;
        digest.stopped_at = report.stopped_at;
        digest.budget = report.budget;
        digest.partition = std::move(report.partition);
        digest.correct = report.correct;
        digest.per_iteration = std::move(report.per_iteration);
    } else {
        ClusterTrace trace =
            run_nonadaptive(env, config.delta, *config.s0_squared, config.mode, digest.seed);
        digest.outcome = RunOutcome::converged;
        digest.stopped_at = 1;
        digest.budget = static_cast<std::uint64_t>(env.num_arms()) * trace.n;
        digest.correct = trace.partition == env.true_partition();
        digest.per_iteration = {
            {1, trace.n, trace.delta_prime, trace.partition.num_blocks()}};
        digest.partition = std::move(trace.partition);
    }
    return digest;
}

BudgetQuantiles budget_quantiles(std::vector<std::uint64_t> budgets) {
    std::sort(budgets.begin(), budgets.end());
    BudgetQuantiles q;
    std::size_t count = budgets.size();
    q.min = budgets.front();
    q.max = budgets.back();
    q.median = count % 2 == 1
                   ? static_cast<double>(budgets[count / 2])
                   : (static_cast<double>(budgets[count / 2 - 1]) +
                      static_cast<double>(budgets[count / 2])) /
                         2.0;
    std::size_t rank = (9 * count + 9) / 10;  // ceil(0.9 count)
    q.p90 = static_cast<double>(budgets[rank - 1]);
    return q;
}

}  // namespace

MonteCarloReport run_trials(const ExperimentConfig& config, std::size_t workers) {
    Environment env = config.build_environment();
    std::size_t K = config.resolved_clusters(env);
    std::size_t trials = config.trials;

    std::vector<TrialDigest> digests(trials);
    if (workers <= 1 || trials <= 1) {
        for (std::size_t t = 0; t < trials; ++t) {
            digests[t] = run_single_trial(env, config, K, t);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (;;) {
                std::size_t t = next.fetch_add(1, std::memory_order_relaxed);
                if (t >= trials) return;
                try {
                    digests[t] = run_single_trial(env, config, K, t);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        std::size_t spawned = std::min(workers, trials);
        pool.reserve(spawned);
        for (std::size_t w = 0; w < spawned; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    MonteCarloReport report;
    report.trials = trials;
    report.digests = std::move(digests);
    std::vector<std::uint64_t> budgets;
    budgets.reserve(trials);
    for (const TrialDigest& digest : report.digests) {
        budgets.push_back(digest.budget);
        if (digest.outcome == RunOutcome::cap_exceeded) {
            ++report.cap_exceeded_count;
        } else if (!digest.correct) {
            ++report.error_count;
        }
    }
    report.error_rate =
        static_cast<double>(report.error_count) / static_cast<double>(trials);
    report.budgets = budget_quantiles(std::move(budgets));

    if (env.num_clusters() >= 2) {
        OracleValue snr = env.signal_to_noise();
        BudgetBound bound = budget_bound(env.num_arms(), config.delta, snr.value);
        SnrSummary summary;
        summary.s_star_squared = snr.value;
        summary.std_error = snr.std_error;
        summary.exact = snr.exact;
        summary.k_star = bound.k_star;
        summary.tau_bound = bound.tau_bound;
        std::size_t within = 0;
        for (const TrialDigest& digest : report.digests) {
            if (static_cast<double>(digest.budget) <= bound.tau_bound) ++within;
        }
        summary.within_bound_fraction =
            static_cast<double>(within) / static_cast<double>(trials);
        report.snr = summary;
    }
    return report;
}

namespace {

std::string outcome_label(RunOutcome outcome) {
    return outcome == RunOutcome::converged ? "converged" : "cap-exceeded";
}

RunOutcome outcome_from_label(const std::string& label) {
    if (label == "converged") return RunOutcome::converged;
    if (label == "cap-exceeded") return RunOutcome::cap_exceeded;
    throw std::runtime_error("unknown outcome '" + label + "'");
}

std::string emit_csv(const MonteCarloReport& report) {
    std::string out = "trial,seed,stopped_at,budget,n_blocks,correct\n";
    for (const TrialDigest& digest : report.digests) {
        out += std::to_string(digest.trial);
        out += ',';
        out += std::to_string(digest.seed);
        out += ',';
        out += digest.outcome == RunOutcome::cap_exceeded
                   ? "cap-exceeded"
                   : std::to_string(digest.stopped_at);
        out += ',';
        out += std::to_string(digest.budget);
        out += ',';
        out += std::to_string(digest.partition.num_blocks());
        out += ',';
        out += digest.correct ? "true" : "false";
        out += '\n';
    }
    out += "# trials=" + std::to_string(report.trials) + '\n';
    out += "# error_count=" + std::to_string(report.error_count) + '\n';
    out += "# cap_exceeded_count=" + std::to_string(report.cap_exceeded_count) + '\n';
    out += "# error_rate=" + format_double(report.error_rate) + '\n';
    out += "# budget_min=" + std::to_string(report.budgets.min) + '\n';
    out += "# budget_median=" + format_double(report.budgets.median) + '\n';
    out += "# budget_p90=" + format_double(report.budgets.p90) + '\n';
    out += "# budget_max=" + std::to_string(report.budgets.max) + '\n';
    if (report.snr) {
        out += "# s_star_squared=" + format_double(report.snr->s_star_squared) + '\n';
        if (!report.snr->exact) {
            out += "# s_star_std_error=" + format_double(report.snr->std_error) + '\n';
            out += "# s_star_approximate=true\n";
        }
        out += "# k_star=" + std::to_string(report.snr->k_star) + '\n';
        out += "# tau_bound=" + format_double(report.snr->tau_bound) + '\n';
        out += "# within_bound_fraction=" +
               format_double(report.snr->within_bound_fraction) + '\n';
    }
    return out;
}

ordered_json partition_to_json(const Partition& partition) {
    ordered_json blocks = ordered_json::array();
    for (const auto& block : partition.blocks()) {
        blocks.push_back(block);
    }
    return blocks;
}

Partition partition_from_json(const ordered_json& value) {
    std::vector<std::vector<std::size_t>> blocks;
    std::size_t total = 0;
    for (const auto& block : value) {
        blocks.push_back(block.get<std::vector<std::size_t>>());
        total += blocks.back().size();
    }
    return Partition(std::move(blocks), total);
}

std::string emit_structured(const MonteCarloReport& report) {
    ordered_json doc;
    doc["trials"] = report.trials;
    doc["error_count"] = report.error_count;
    doc["cap_exceeded_count"] = report.cap_exceeded_count;
    doc["error_rate"] = report.error_rate;
    doc["budgets"] = {{"min", report.budgets.min},
                      {"max", report.budgets.max},
                      {"median", report.budgets.median},
                      {"p90", report.budgets.p90}};
    if (report.snr) {
        doc["snr"] = {{"s_star_squared", report.snr->s_star_squared},
                      {"std_error", report.snr->std_error},
                      {"exact", report.snr->exact},
                      {"k_star", report.snr->k_star},
                      {"tau_bound", report.snr->tau_bound},
                      {"within_bound_fraction", report.snr->within_bound_fraction}};
    } else {
        doc["snr"] = nullptr;
    }
    ordered_json digests = ordered_json::array();
    for (const TrialDigest& digest : report.digests) {
        ordered_json rows = ordered_json::array();
        for (const IterationRow& row : digest.per_iteration) {
            rows.push_back({{"k", row.k},
                            {"n_k", row.n_k},
                            {"delta_k", row.delta_k},
                            {"num_blocks", row.num_blocks}});
        }
        digests.push_back({{"trial", digest.trial},
                           {"seed", digest.seed},
                           {"outcome", outcome_label(digest.outcome)},
                           {"stopped_at", digest.stopped_at},
                           {"budget", digest.budget},
                           {"partition", partition_to_json(digest.partition)},
                           {"correct", digest.correct},
                           {"per_iteration", rows}});
    }
    doc["digests"] = std::move(digests);
    return doc.dump(2) + "\n";
}

}  // namespace

std::string emit_report(const MonteCarloReport& report, ReportFormat format) {
    return format == ReportFormat::csv ? emit_csv(report) : emit_structured(report);
}

namespace {
MonteCarloReport report_from_json(const ordered_json& doc);
}  // namespace

MonteCarloReport parse_structured_report(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw std::runtime_error(std::string("report is not valid JSON: ") + e.what());
    }
    try {
        return report_from_json(doc);
    } catch (const ordered_json::exception& e) {
        throw std::runtime_error(std::string("malformed report: ") + e.what());
    }
}

namespace {

MonteCarloReport report_from_json(const ordered_json& doc) {
    MonteCarloReport report;
    report.trials = doc.at("trials").get<std::size_t>();
    report.error_count = doc.at("error_count").get<std::size_t>();
    report.cap_exceeded_count = doc.at("cap_exceeded_count").get<std::size_t>();
    report.error_rate = doc.at("error_rate").get<double>();
    const auto& budgets = doc.at("budgets");
    report.budgets.min = budgets.at("min").get<std::uint64_t>();
    report.budgets.max = budgets.at("max").get<std::uint64_t>();
    report.budgets.median = budgets.at("median").get<double>();
    report.budgets.p90 = budgets.at("p90").get<double>();
    const auto& snr = doc.at("snr");
    if (!snr.is_null()) {
        SnrSummary summary;
        summary.s_star_squared = snr.at("s_star_squared").get<double>();
        summary.std_error = snr.at("std_error").get<double>();
        summary.exact = snr.at("exact").get<bool>();
        summary.k_star = snr.at("k_star").get<std::size_t>();
        summary.tau_bound = snr.at("tau_bound").get<double>();
        summary.within_bound_fraction = snr.at("within_bound_fraction").get<double>();
        report.snr = summary;
    }
    for (const auto& entry : doc.at("digests")) {
        TrialDigest digest;
        digest.trial = entry.at("trial").get<std::size_t>();
        digest.seed = entry.at("seed").get<std::uint64_t>();
        digest.outcome = outcome_from_label(entry.at("outcome").get<std::string>());
        digest.stopped_at = entry.at("stopped_at").get<std::size_t>();
        digest.budget = entry.at("budget").get<std::uint64_t>();
        digest.partition = partition_from_json(entry.at("partition"));
        digest.correct = entry.at("correct").get<bool>();
        for (const auto& row : entry.at("per_iteration")) {
            digest.per_iteration.push_back({row.at("k").get<std::size_t>(),
                                            row.at("n_k").get<std::size_t>(),
                                            row.at("delta_k").get<double>(),
                                            row.at("num_blocks").get<std::size_t>()});
        }
        report.digests.push_back(std::move(digest));
    }
    return report;
}

}  // namespace

}  // namespace kabc
