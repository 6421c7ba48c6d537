#include <cmath>

#include "kabc/gram.hpp"

// Reference implementation of the Gram reductions. Plain loops, one
// std::exp per pair; the SIMD variants must agree with this to ~1e-13.

namespace kabc::gram {
namespace {

inline double pair_term(KernelFamily family, double inv_scale,
                        const PointsSoA& x, std::size_t s, const PointsSoA& y,
                        std::size_t t) {
    double dist_sq = 0.0;
    for (std::size_t k = 0; k < x.d; ++k) {
        const double diff = x.dim(k)[s] - y.dim(k)[t];
        dist_sq += diff * diff;
    }
    const double arg = family == KernelFamily::gaussian_rbf
                           ? dist_sq * inv_scale
                           : std::sqrt(dist_sq) * inv_scale;
    return std::exp(-arg);
}

inline double inv_scale_for(KernelFamily family, double bandwidth) {
    return family == KernelFamily::gaussian_rbf ? 1.0 / (bandwidth * bandwidth)
                                                : 1.0 / bandwidth;
}

double cross_sum_scalar(KernelFamily family, double bandwidth,
                        const PointsSoA& x, const PointsSoA& y) {
    const double inv = inv_scale_for(family, bandwidth);
    double sum = 0.0;
    for (std::size_t s = 0; s < x.n; ++s) {
        for (std::size_t t = 0; t < y.n; ++t) {
            sum += pair_term(family, inv, x, s, y, t);
        }
    }
    return sum;
}

double self_sum_scalar(KernelFamily family, double bandwidth,
                       const PointsSoA& x) {
    const double inv = inv_scale_for(family, bandwidth);
    // Strict upper triangle twice plus the diagonal, where Psi(0) = 1.
    double upper = 0.0;
    for (std::size_t s = 0; s < x.n; ++s) {
        for (std::size_t t = s + 1; t < x.n; ++t) {
            upper += pair_term(family, inv, x, s, x, t);
        }
    }
    return 2.0 * upper + static_cast<double>(x.n);
}

}  // namespace

PointsSoA PointsSoA::from_row_major(std::span<const double> rows, std::size_t n,
                                    std::size_t d) {
    PointsSoA out;
    out.n = n;
    out.d = d;
    out.coords.resize(n * d);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t k = 0; k < d; ++k) {
            out.coords[k * n + t] = rows[t * d + k];
        }
    }
    return out;
}

const Kernels& scalar_kernels() {
    static const Kernels kernels{"scalar", &cross_sum_scalar, &self_sum_scalar};
    return kernels;
}

}  // namespace kabc::gram
