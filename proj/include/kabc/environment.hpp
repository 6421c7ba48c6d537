#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "kabc/kernel.hpp"
#include "kabc/partition.hpp"
#include "kabc/rng.hpp"

// Synthetic bandit environments: per-arm sampling distributions on R^d, the
// ground-truth partition, and exact (or Monte Carlo) oracles for the RKHS
// quantities that the theory is stated in terms of. Environments are
// immutable after construction and shareable across threads; sampling takes
// an explicit caller-owned stream.

namespace kabc {

struct DiscreteArm {
    std::vector<std::vector<double>> support;  // points in R^d
    std::vector<double> probabilities;

    bool operator==(const DiscreteArm&) const = default;
};

struct TruncatedGaussianArm {
    std::vector<double> mean;
    double scale = 1.0;
    double radius = 1.0;  // support is the closed ball of this radius at mean

    bool operator==(const TruncatedGaussianArm&) const = default;
};

using ArmSpec = std::variant<DiscreteArm, TruncatedGaussianArm>;

// Ground-truth distributional identity. Structural: field-by-field equality,
// including the order of discrete support points.
bool same_distribution(const ArmSpec& a, const ArmSpec& b);

struct SampleBatch {
    std::size_t arm = 0;
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> points;  // row-major, n x d

    std::span<const double> point(std::size_t t) const {
        return {points.data() + t * d, d};
    }
};

// Oracle quantities. Discrete arms have exact closed forms; pairs involving
// a truncated Gaussian are estimated by Monte Carlo with a fixed number of
// paired draws and carry a standard error.
struct OracleValue {
    double value = 0.0;
    double std_error = 0.0;
    bool exact = true;
};

class Environment {
public:
    // Validates the arm specs against the kernel and derives the true
    // partition from structural equality. Throws std::invalid_argument.
    Environment(std::vector<ArmSpec> arms, KernelSpec kernel);

    std::size_t num_arms() const { return arms_.size(); }
    const ArmSpec& arm(std::size_t i) const;
    const KernelSpec& kernel() const { return kernel_; }
    const Partition& true_partition() const { return true_partition_; }
    std::size_t num_clusters() const { return true_partition_.num_blocks(); }

    // n i.i.d. draws from arm's distribution; deterministic given the stream.
    SampleBatch sample(std::size_t arm, std::size_t n, rng::Xoshiro256ss& stream) const;

    // MMD |mu_i - mu_j| between the arms' kernel mean embeddings.
    OracleValue true_mmd(std::size_t i, std::size_t j) const;

    // RKHS variance V*_i = E g(X, X) - E g(X, X').
    OracleValue true_variance(std::size_t i) const;

    // Signal-to-noise ratio s_*^2: over pairs with distinct embeddings, the
    // minimum of |mu_i-mu_j|^2 / (V*_i v V*_j) and 2 |mu_i-mu_j| / sqrt(sup g).
    // Pairs whose variances are both zero contribute only the second term.
    // Throws std::invalid_argument when all arms share one embedding.
    OracleValue signal_to_noise() const;

private:
    std::vector<ArmSpec> arms_;
    KernelSpec kernel_;
    Partition true_partition_;
};

// Process-wide count of samples drawn through Environment::sample, for
// reconciling reported budgets against actual draws.
std::uint64_t samples_drawn();
void reset_samples_drawn();

}  // namespace kabc
