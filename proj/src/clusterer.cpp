#include "kabc/clusterer.hpp"

#include <stdexcept>
#include <string>

namespace kabc {

std::string_view mode_name(ThresholdMode mode) {
    switch (mode) {
        case ThresholdMode::variance_aware: return "variance-aware";
        case ThresholdMode::subgaussian: return "subgaussian";
    }
    throw std::invalid_argument("unknown threshold mode");
}

ThresholdMode mode_from_name(std::string_view name) {
    if (name == "variance-aware") return ThresholdMode::variance_aware;
    if (name == "subgaussian") return ThresholdMode::subgaussian;
    throw std::invalid_argument("unknown threshold mode '" + std::string(name) + "'");
}

ClusterTrace cluster(const Environment& env, std::size_t n, double delta_prime,
                     ThresholdMode mode, std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("cluster needs n >= 2");
    }
    if (!(delta_prime > 0.0 && delta_prime <= 1.0)) {
        throw std::invalid_argument("delta_prime must lie in (0, 1]");
    }
    const KernelSpec& kernel = env.kernel();
    KernelBounds bounds = kernel_bounds(kernel);
    std::size_t num_arms = env.num_arms();

    std::vector<BatchSummary> summaries;
    summaries.reserve(num_arms);
    for (std::size_t a = 0; a < num_arms; ++a) {
        rng::Xoshiro256ss stream(rng::derive(seed, a));
        summaries.push_back(summarize_batch(kernel, env.sample(a, n, stream)));
    }

    ClusterTrace trace;
    trace.n = n;
    trace.delta_prime = delta_prime;
    trace.mode = mode;
    trace.pair_tests.reserve(num_arms * (num_arms - 1) / 2);
    for (std::size_t i = 0; i < num_arms; ++i) {
        for (std::size_t j = i + 1; j < num_arms; ++j) {
            PairTest test;
            test.i = i;
            test.j = j;
            test.stats = pair_statistics(kernel, summaries[i], summaries[j]);
            test.threshold =
                mode == ThresholdMode::variance_aware
                    ? threshold(n, delta_prime, num_arms, test.stats.var_hat_i,
                                test.stats.var_hat_j, bounds.range)
                    : threshold_subgaussian(n, delta_prime, num_arms, bounds.sup);
            test.edge = test.stats.mmd_hat <= test.threshold;
            if (test.edge) trace.edges.emplace_back(i, j);
            trace.pair_tests.push_back(test);
        }
    }
    trace.partition = connected_components(num_arms, trace.edges);
    return trace;
}

}  // namespace kabc
