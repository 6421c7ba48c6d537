#include "kabc/environment.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace kabc {

namespace {

std::atomic<std::uint64_t> g_samples_drawn{0};

// Paired-draw count for Monte Carlo oracles. Fixed so oracle values are
// stable across runs; the standard error is reported alongside.
constexpr std::size_t kOracleDraws = 1'000'000;
constexpr std::uint64_t kOracleSeed = 0x6f7261636c65u;

// Rejection sampling must terminate for any radius > 0; this many misses in
// a row means the arm is effectively unsatisfiable in double precision.
constexpr std::size_t kMaxRejectionTries = 1'000'000;

std::string arm_label(std::size_t i) { return "arm " + std::to_string(i); }

void validate_arm(const ArmSpec& spec, std::size_t index, std::size_t dimension) {
    if (const auto* disc = std::get_if<DiscreteArm>(&spec)) {
        if (disc->support.empty()) {
            throw std::invalid_argument(arm_label(index) + ": empty support");
        }
        if (disc->probabilities.size() != disc->support.size()) {
            throw std::invalid_argument(arm_label(index) +
                                        ": probabilities and support differ in length");
        }
        double total = 0.0;
        for (double p : disc->probabilities) {
            if (!(p >= 0.0)) {
                throw std::invalid_argument(arm_label(index) + ": negative probability");
            }
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw std::invalid_argument(arm_label(index) + ": probabilities sum to " +
                                        std::to_string(total) + ", expected 1");
        }
        for (std::size_t a = 0; a < disc->support.size(); ++a) {
            if (disc->support[a].size() != dimension) {
                throw std::invalid_argument(arm_label(index) + ": support point " +
                                            std::to_string(a) + " has dimension " +
                                            std::to_string(disc->support[a].size()) +
                                            ", kernel expects " + std::to_string(dimension));
            }
            for (std::size_t b = 0; b < a; ++b) {
                if (disc->support[a] == disc->support[b]) {
                    throw std::invalid_argument(arm_label(index) +
                                                ": duplicate support points " +
                                                std::to_string(b) + " and " +
                                                std::to_string(a));
                }
            }
        }
    } else {
        const auto& tg = std::get<TruncatedGaussianArm>(spec);
        if (tg.mean.size() != dimension) {
            throw std::invalid_argument(arm_label(index) + ": mean has dimension " +
                                        std::to_string(tg.mean.size()) +
                                        ", kernel expects " + std::to_string(dimension));
        }
        if (!(tg.scale > 0.0)) {
            throw std::invalid_argument(arm_label(index) + ": scale must be positive");
        }
        if (!(tg.radius > 0.0)) {
            throw std::invalid_argument(arm_label(index) + ": radius must be positive");
        }
    }
}

Partition partition_by_distribution(const std::vector<ArmSpec>& arms) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < arms.size(); ++i) {
        for (std::size_t j = i + 1; j < arms.size(); ++j) {
            if (same_distribution(arms[i], arms[j])) {
                edges.emplace_back(i, j);
            }
        }
    }
    return connected_components(arms.size(), edges);
}

// Nonnegative-by-theory quantity: negatives within the tolerance are
// rounding (exact case) or estimator noise (Monte Carlo case, where the
// tolerance widens with the standard error); anything larger means the
// computation itself is wrong.
double clamp_nonnegative(double value, double se, const char* what) {
    if (value >= 0.0) return value;
    if (value >= -(1e-9 + 8.0 * se)) return 0.0;
    throw std::runtime_error(std::string(what) + " came out " + std::to_string(value) +
                             ", below the rounding tolerance");
}

struct MonteCarloMean {
    double mean = 0.0;
    double std_error = 0.0;
};

// Sqrt with delta-method error propagation; near zero the linearization
// breaks down, so fall back to the width of the implied interval.
OracleValue sqrt_oracle(double value_sq, double se_sq, const char* what) {
    double clamped = clamp_nonnegative(value_sq, se_sq, what);
    double value = std::sqrt(clamped);
    double se = 0.0;
    if (se_sq > 0.0) {
        se = value > se_sq ? se_sq / (2.0 * value) : std::sqrt(se_sq);
    }
    return {value, se, se_sq == 0.0};
}

}  // namespace

bool same_distribution(const ArmSpec& a, const ArmSpec& b) { return a == b; }

Environment::Environment(std::vector<ArmSpec> arms, KernelSpec kernel)
    : arms_(std::move(arms)), kernel_(kernel), true_partition_(Partition::singletons(1)) {
    kernel_.validate();
    if (arms_.size() < 2) {
        throw std::invalid_argument("environment needs at least 2 arms");
    }
    for (std::size_t i = 0; i < arms_.size(); ++i) {
        validate_arm(arms_[i], i, kernel_.dimension);
    }
    true_partition_ = partition_by_distribution(arms_);
}

const ArmSpec& Environment::arm(std::size_t i) const {
    if (i >= arms_.size()) {
        throw std::invalid_argument("arm index " + std::to_string(i) + " out of range [0, " +
                                    std::to_string(arms_.size()) + ")");
    }
    return arms_[i];
}

namespace {

// One draw from an arm, appended to out. Shared by sample() and the Monte
// Carlo oracles; only sample() counts toward the budget audit.
void draw_point(const ArmSpec& spec, std::size_t d, rng::Xoshiro256ss& stream,
                std::vector<double>& out) {
    if (const auto* disc = std::get_if<DiscreteArm>(&spec)) {
        double u = stream.uniform01();
        std::size_t pick = disc->support.size() - 1;
        double cumulative = 0.0;
        for (std::size_t a = 0; a < disc->probabilities.size(); ++a) {
            cumulative += disc->probabilities[a];
            if (u < cumulative) {
                pick = a;
                break;
            }
        }
        const auto& point = disc->support[pick];
        out.insert(out.end(), point.begin(), point.end());
    } else {
        const auto& tg = std::get<TruncatedGaussianArm>(spec);
        for (std::size_t attempt = 0; attempt < kMaxRejectionTries; ++attempt) {
            double norm_sq = 0.0;
            std::size_t start = out.size();
            for (std::size_t k = 0; k < d; ++k) {
                double z = tg.scale * stream.normal();
                norm_sq += z * z;
                out.push_back(tg.mean[k] + z);
            }
            if (norm_sq <= tg.radius * tg.radius) return;
            out.resize(start);
        }
        throw std::runtime_error("rejection sampling failed to hit the truncation ball");
    }
}

}  // namespace

SampleBatch Environment::sample(std::size_t arm, std::size_t n,
                                rng::Xoshiro256ss& stream) const {
    const ArmSpec& spec = this->arm(arm);
    if (n < 1) {
        throw std::invalid_argument("sample count must be at least 1");
    }
    SampleBatch batch;
    batch.arm = arm;
    batch.n = n;
    batch.d = kernel_.dimension;
    batch.points.reserve(n * batch.d);
    for (std::size_t t = 0; t < n; ++t) {
        draw_point(spec, batch.d, stream, batch.points);
    }
    g_samples_drawn.fetch_add(n, std::memory_order_relaxed);
    return batch;
}

namespace {

// E g(X, Y) for independent X ~ a, Y ~ b, exact over discrete supports.
double mean_cross_kernel(const KernelSpec& kernel, const DiscreteArm& a,
                         const DiscreteArm& b) {
    double total = 0.0;
    for (std::size_t s = 0; s < a.support.size(); ++s) {
        for (std::size_t t = 0; t < b.support.size(); ++t) {
            total += a.probabilities[s] * b.probabilities[t] *
                     evaluate(kernel, a.support[s], b.support[t]);
        }
    }
    return total;
}

MonteCarloMean monte_carlo_mean(const std::vector<double>& samples) {
    double mean = 0.0;
    for (double h : samples) mean += h;
    mean /= static_cast<double>(samples.size());
    double ssd = 0.0;
    for (double h : samples) ssd += (h - mean) * (h - mean);
    double variance = ssd / static_cast<double>(samples.size() - 1);
    return {mean, std::sqrt(variance / static_cast<double>(samples.size()))};
}

}  // namespace

OracleValue Environment::true_mmd(std::size_t i, std::size_t j) const {
    const ArmSpec& arm_i = arm(i);
    const ArmSpec& arm_j = arm(j);
    if (i == j) {
        throw std::invalid_argument("true_mmd needs two distinct arms");
    }
    const auto* disc_i = std::get_if<DiscreteArm>(&arm_i);
    const auto* disc_j = std::get_if<DiscreteArm>(&arm_j);
    if (disc_i && disc_j) {
        double radicand = mean_cross_kernel(kernel_, *disc_i, *disc_i) +
                          mean_cross_kernel(kernel_, *disc_j, *disc_j) -
                          2.0 * mean_cross_kernel(kernel_, *disc_i, *disc_j);
        return sqrt_oracle(radicand, 0.0, "squared true mmd");
    }

    // E[g(X,X') + g(Y,Y') - 2 g(X,Y)] estimated from independent paired
    // draws; unbiased for the squared MMD.
    rng::Xoshiro256ss stream(rng::derive(rng::derive(kOracleSeed, i), j));
    std::size_t d = kernel_.dimension;
    std::vector<double> scratch;
    std::vector<double> terms(kOracleDraws);
    for (std::size_t r = 0; r < kOracleDraws; ++r) {
        scratch.clear();
        draw_point(arm_i, d, stream, scratch);
        draw_point(arm_i, d, stream, scratch);
        draw_point(arm_j, d, stream, scratch);
        draw_point(arm_j, d, stream, scratch);
        std::span<const double> x(scratch.data(), d);
        std::span<const double> xp(scratch.data() + d, d);
        std::span<const double> y(scratch.data() + 2 * d, d);
        std::span<const double> yp(scratch.data() + 3 * d, d);
        terms[r] = evaluate(kernel_, x, xp) + evaluate(kernel_, y, yp) -
                   2.0 * evaluate(kernel_, x, y);
    }
    MonteCarloMean mc = monte_carlo_mean(terms);
    return sqrt_oracle(mc.mean, mc.std_error, "squared true mmd");
}

OracleValue Environment::true_variance(std::size_t i) const {
    const ArmSpec& spec = arm(i);
    if (const auto* disc = std::get_if<DiscreteArm>(&spec)) {
        double diag = 0.0;
        for (std::size_t a = 0; a < disc->support.size(); ++a) {
            diag += disc->probabilities[a] *
                    evaluate(kernel_, disc->support[a], disc->support[a]);
        }
        double value = diag - mean_cross_kernel(kernel_, *disc, *disc);
        return {clamp_nonnegative(value, 0.0, "true variance"), 0.0, true};
    }

    rng::Xoshiro256ss stream(rng::derive(rng::derive(kOracleSeed, i), i));
    std::size_t d = kernel_.dimension;
    std::vector<double> scratch;
    std::vector<double> terms(kOracleDraws);
    for (std::size_t r = 0; r < kOracleDraws; ++r) {
        scratch.clear();
        draw_point(spec, d, stream, scratch);
        draw_point(spec, d, stream, scratch);
        std::span<const double> x(scratch.data(), d);
        std::span<const double> xp(scratch.data() + d, d);
        terms[r] = evaluate(kernel_, x, x) - evaluate(kernel_, x, xp);
    }
    MonteCarloMean mc = monte_carlo_mean(terms);
    return {clamp_nonnegative(mc.mean, mc.std_error, "true variance"), mc.std_error, false};
}

OracleValue Environment::signal_to_noise() const {
    if (true_partition_.num_blocks() < 2) {
        throw std::invalid_argument("no separated pair; s_* undefined");
    }
    double g_bar = kernel_bounds(kernel_).sup;
    std::size_t n = arms_.size();

    std::vector<OracleValue> variances(n);
    for (std::size_t i = 0; i < n; ++i) variances[i] = true_variance(i);

    OracleValue best{std::numeric_limits<double>::infinity(), 0.0, true};
    bool all_exact = true;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (true_partition_.block_of(i) == true_partition_.block_of(j)) continue;
            OracleValue mmd = true_mmd(i, j);
            all_exact = all_exact && mmd.exact && variances[i].exact && variances[j].exact;

            double noise = std::max(variances[i].value, variances[j].value);
            double first = noise > 0.0 ? mmd.value * mmd.value / noise
                                       : std::numeric_limits<double>::infinity();
            double second = 2.0 * mmd.value / std::sqrt(g_bar);

            OracleValue candidate;
            if (first <= second) {
                std::size_t noisier = variances[i].value >= variances[j].value ? i : j;
                double se_m = 2.0 * mmd.value / noise * mmd.std_error;
                double se_v = noise > 0.0 ? first / noise * variances[noisier].std_error : 0.0;
                candidate = {first, std::sqrt(se_m * se_m + se_v * se_v), false};
            } else {
                candidate = {second, 2.0 * mmd.std_error / std::sqrt(g_bar), false};
            }
            if (candidate.value < best.value) best = candidate;
        }
    }
    best.exact = all_exact;
    if (best.exact) best.std_error = 0.0;
    return best;
}

std::uint64_t samples_drawn() { return g_samples_drawn.load(std::memory_order_relaxed); }

void reset_samples_drawn() { g_samples_drawn.store(0, std::memory_order_relaxed); }

}  // namespace kabc
