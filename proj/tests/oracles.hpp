#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "kabc/environment.hpp"
#include "kabc/kernel.hpp"
#include "kabc/rng.hpp"

// Naive reference implementations, written straight from the definitions
// with per-pair evaluate() calls. Deliberately independent of the library's
// Gram backends so equivalence tests compare two separate code paths.

namespace oracle {

inline double mmd(const kabc::KernelSpec& kernel, const kabc::SampleBatch& a,
                  const kabc::SampleBatch& b) {
    std::size_t n = a.n;
    double total = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
            total += kabc::evaluate(kernel, a.point(s), a.point(t)) -
                     2.0 * kabc::evaluate(kernel, a.point(s), b.point(t)) +
                     kabc::evaluate(kernel, b.point(s), b.point(t));
        }
    }
    double radicand = total / (static_cast<double>(n) * static_cast<double>(n));
    return std::sqrt(radicand < 0.0 ? 0.0 : radicand);
}

inline double variance(const kabc::KernelSpec& kernel, const kabc::SampleBatch& batch) {
    std::size_t n = batch.n;
    double total = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        double row = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            row += kabc::evaluate(kernel, batch.point(t), batch.point(s));
        }
        total += kabc::evaluate(kernel, batch.point(t), batch.point(t)) -
                 row / static_cast<double>(n);
    }
    double value = total / static_cast<double>(n - 1);
    return value < 0.0 ? 0.0 : value;
}

inline double true_mmd_discrete(const kabc::KernelSpec& kernel, const kabc::DiscreteArm& a,
                                const kabc::DiscreteArm& b) {
    auto cross = [&](const kabc::DiscreteArm& p, const kabc::DiscreteArm& q) {
        double total = 0.0;
        for (std::size_t s = 0; s < p.support.size(); ++s) {
            for (std::size_t t = 0; t < q.support.size(); ++t) {
                total += p.probabilities[s] * q.probabilities[t] *
                         kabc::evaluate(kernel, p.support[s], q.support[t]);
            }
        }
        return total;
    };
    double radicand = cross(a, a) + cross(b, b) - 2.0 * cross(a, b);
    return std::sqrt(radicand < 0.0 ? 0.0 : radicand);
}

// Batch of n uniform points in [lo, hi]^d, bypassing Environment.
inline kabc::SampleBatch random_batch(kabc::rng::Xoshiro256ss& stream, std::size_t n,
                                      std::size_t d, double lo = -2.0, double hi = 2.0) {
    kabc::SampleBatch batch;
    batch.arm = 0;
    batch.n = n;
    batch.d = d;
    batch.points.reserve(n * d);
    for (std::size_t i = 0; i < n * d; ++i) {
        batch.points.push_back(lo + (hi - lo) * stream.uniform01());
    }
    return batch;
}

}  // namespace oracle
