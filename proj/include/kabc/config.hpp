#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kabc/clusterer.hpp"
#include "kabc/environment.hpp"

// Experiment configuration: JSON documents describing the environment (arm
// blocks with replication counts), the kernel, and the run parameters.
// Validation failures carry the offending field path.

namespace kabc {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ArmBlock {
    ArmSpec arm;
    std::size_t count = 1;  // replicated arms share the distribution
};

enum class Variant { adaptive, nonadaptive };

std::string_view variant_name(Variant variant);

struct ExperimentConfig {
    std::vector<ArmBlock> blocks;
    KernelSpec kernel;
    double delta = 0.1;
    std::optional<std::size_t> clusters;  // empty means "truth"
    ThresholdMode mode = ThresholdMode::variance_aware;
    Variant variant = Variant::adaptive;
    std::optional<double> s0_squared;  // required by the nonadaptive variant
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    std::size_t cap = 40;

    // Expands blocks into the arm list. Throws ConfigError if the arms do
    // not form a valid environment.
    Environment build_environment() const;

    // K from the config, or the true block count when left as "truth".
    std::size_t resolved_clusters(const Environment& env) const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace kabc
