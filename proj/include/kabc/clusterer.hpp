#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "kabc/environment.hpp"
#include "kabc/statistics.hpp"

// CLUSTER(n, delta'): draw n fresh samples from every arm, test all pairs,
// connect the pairs whose empirical distance stays at or below the
// threshold, and return the connected components.

namespace kabc {

enum class ThresholdMode { variance_aware, subgaussian };

std::string_view mode_name(ThresholdMode mode);
ThresholdMode mode_from_name(std::string_view name);

struct PairTest {
    std::size_t i = 0;
    std::size_t j = 0;
    PairStatistics stats;
    double threshold = 0.0;
    bool edge = false;

    bool operator==(const PairTest&) const = default;
};

struct ClusterTrace {
    std::size_t n = 0;
    double delta_prime = 0.0;
    ThresholdMode mode = ThresholdMode::variance_aware;
    std::vector<PairTest> pair_tests;  // all pairs i < j, lexicographic
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    Partition partition = Partition::singletons(1);

    bool operator==(const ClusterTrace&) const = default;
};

// Consumes exactly N * n samples. Each arm draws from its own stream derived
// from the seed, so results do not depend on evaluation order. Ties at the
// threshold connect (comparison is <=).
ClusterTrace cluster(const Environment& env, std::size_t n, double delta_prime,
                     ThresholdMode mode, std::uint64_t seed);

}  // namespace kabc
