#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kabc/config.hpp"
#include "kabc/kabc.hpp"
#include "kabc/montecarlo.hpp"

// CLI driver: validate configs, run single trials with full traces, sweep
// Monte Carlo experiments, and print the oracle signal-to-noise context.

namespace {

using kabc::ExperimentConfig;
using ordered_json = nlohmann::ordered_json;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

std::string format_double(double value) {
    char buffer[32];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) throw std::runtime_error("double formatting failed");
    return std::string(buffer, end);
}

ordered_json partition_to_json(const kabc::Partition& partition) {
    ordered_json blocks = ordered_json::array();
    for (const auto& block : partition.blocks()) blocks.push_back(block);
    return blocks;
}

ordered_json trace_to_json(const kabc::ClusterTrace& trace) {
    ordered_json pair_tests = ordered_json::array();
    for (const kabc::PairTest& test : trace.pair_tests) {
        pair_tests.push_back({{"i", test.i},
                              {"j", test.j},
                              {"mmd_hat", test.stats.mmd_hat},
                              {"var_hat_i", test.stats.var_hat_i},
                              {"var_hat_j", test.stats.var_hat_j},
                              {"threshold", test.threshold},
                              {"edge", test.edge}});
    }
    ordered_json edges = ordered_json::array();
    for (const auto& [i, j] : trace.edges) edges.push_back({i, j});
    return {{"n", trace.n},
            {"delta_prime", trace.delta_prime},
            {"mode", kabc::mode_name(trace.mode)},
            {"pair_tests", std::move(pair_tests)},
            {"edges", std::move(edges)},
            {"partition", partition_to_json(trace.partition)}};
}

int command_validate(const ExperimentConfig& config) {
    kabc::Environment env = config.build_environment();
    std::cout << "ok\n"
              << "arms=" << env.num_arms() << " clusters=" << env.num_clusters()
              << " kernel=" << kabc::family_name(config.kernel.family)
              << " dimension=" << config.kernel.dimension
              << " delta=" << format_double(config.delta)
              << " variant=" << kabc::variant_name(config.variant)
              << " mode=" << kabc::mode_name(config.mode)
              << " trials=" << config.trials << "\n";
    return 0;
}

int command_run(const ExperimentConfig& config, const std::string& out_path) {
    kabc::Environment env = config.build_environment();
    std::uint64_t seed = kabc::rng::derive(config.seed, 0);  // montecarlo trial 0

    ordered_json doc;
    doc["seed"] = seed;
    if (config.variant == kabc::Variant::adaptive) {
        kabc::KabcOptions options;
        options.mode = config.mode;
        options.cap = config.cap;
        options.keep_traces = true;
        kabc::RunReport report = kabc::kabc_run(env, config.delta,
                                                config.resolved_clusters(env), options, seed);
        doc["outcome"] =
            report.outcome == kabc::RunOutcome::converged ? "converged" : "cap-exceeded";
        doc["stopped_at"] = report.stopped_at;
        doc["budget"] = report.budget;
        doc["correct"] = report.correct;
        doc["partition"] = partition_to_json(report.partition);
        ordered_json iterations = ordered_json::array();
        for (std::size_t idx = 0; idx < report.traces.size(); ++idx) {
            ordered_json entry = trace_to_json(report.traces[idx]);
            entry["k"] = report.per_iteration[idx].k;
            iterations.push_back(std::move(entry));
        }
        doc["iterations"] = std::move(iterations);
    } else {
        kabc::ClusterTrace trace = kabc::run_nonadaptive(env, config.delta,
                                                         *config.s0_squared, config.mode, seed);
        doc["outcome"] = "converged";
        doc["budget"] = static_cast<std::uint64_t>(env.num_arms()) * trace.n;
        doc["correct"] = trace.partition == env.true_partition();
        doc["partition"] = partition_to_json(trace.partition);
        doc["iterations"] = ordered_json::array({trace_to_json(trace)});
    }
    write_output(out_path, doc.dump(2) + "\n");
    return 0;
}

int command_montecarlo(const ExperimentConfig& config, std::size_t workers,
                       const std::string& format, const std::string& out_path) {
    kabc::MonteCarloReport report = kabc::run_trials(config, workers);
    kabc::ReportFormat report_format =
        format == "csv" ? kabc::ReportFormat::csv : kabc::ReportFormat::structured;
    write_output(out_path, kabc::emit_report(report, report_format));
    return 0;
}

int command_snr(const ExperimentConfig& config, const std::string& out_path) {
    kabc::Environment env = config.build_environment();
    kabc::OracleValue snr = env.signal_to_noise();
    kabc::BudgetBound bound = kabc::budget_bound(env.num_arms(), config.delta, snr.value);
    std::string out = "s_star_squared=" + format_double(snr.value) + "\n";
    if (!snr.exact) {
        out += "s_star_std_error=" + format_double(snr.std_error) + "\n";
        out += "s_star_approximate=true\n";
    }
    out += "k_star=" + std::to_string(bound.k_star) + "\n";
    out += "tau_bound=" + format_double(bound.tau_bound) + "\n";
    write_output(out_path, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bandit clustering simulator: adaptive kernel-based clustering "
                 "with Monte Carlo verification of its guarantees"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::optional<std::uint64_t> seed_override;
    std::optional<std::size_t> trials_override;
    std::size_t workers = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config file (JSON)")
            ->required();
        cmd->add_option("--seed", seed_override, "override the config's root seed");
        cmd->add_option("--out", out_path, "write output to this file instead of stdout");
    };

    CLI::App* validate = app.add_subcommand("validate", "check a config and exit");
    validate->add_option("--config", config_path, "experiment config file (JSON)")
        ->required();

    CLI::App* run = app.add_subcommand("run", "single trial with full per-pair traces");
    add_common(run);

    CLI::App* montecarlo =
        app.add_subcommand("montecarlo", "run the configured Monte Carlo experiment");
    add_common(montecarlo);
    montecarlo->add_option("--trials", trials_override, "override the config's trial count")
        ->check(CLI::PositiveNumber);
    montecarlo->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "structured"}));
    montecarlo->add_option("--workers", workers, "worker threads for trials")
        ->check(CLI::PositiveNumber);

    CLI::App* snr =
        app.add_subcommand("snr", "print s_*^2, k_*, and the budget bound for a config");
    add_common(snr);

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig config = kabc::load_config(config_path);
        if (seed_override) config.seed = *seed_override;
        if (trials_override) config.trials = *trials_override;

        if (validate->parsed()) return command_validate(config);
        if (run->parsed()) return command_run(config, out_path);
        if (montecarlo->parsed()) return command_montecarlo(config, workers, format, out_path);
        if (snr->parsed()) return command_snr(config, out_path);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
