#include "kabc/gram.hpp"

// AVX2+FMA Gram reductions. This translation unit is compiled with
// -mavx2 -mfma on x86 targets; nothing here executes unless the runtime
// CPU check in avx2_kernels() passes.

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__) || defined(_M_IX86)
#define KABC_GRAM_X86 1
#else
#define KABC_GRAM_X86 0
#endif

#if KABC_GRAM_X86

#include <immintrin.h>

#include <cmath>

namespace kabc::gram {
namespace {

// exp(x) for x in [-inf, 0], Cephes-style rational approximation, ~1 ulp.
// Arguments below -700 are clamped; exp(-700) ~ 1e-304 is already far under
// every tolerance in this code base.
inline __m256d exp_pd(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.44269504088896340736);
    const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
    const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
    const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
    const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
    const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
    const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
    const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
    const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

    x = _mm256_max_pd(x, _mm256_set1_pd(-700.0));
    const __m256d n = _mm256_round_pd(
        _mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    // r = x - n*ln2 with ln2 split for an exact-enough reduction
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    const __m256d rr = _mm256_mul_pd(r, r);
    const __m256d pr =
        _mm256_mul_pd(r, _mm256_fmadd_pd(_mm256_fmadd_pd(p0, rr, p1), rr, p2));
    const __m256d qr = _mm256_fmadd_pd(
        _mm256_fmadd_pd(_mm256_fmadd_pd(q0, rr, q1), rr, q2), rr, q3);
    // e^r = 1 + 2*pr/(qr - pr)
    __m256d e = _mm256_div_pd(pr, _mm256_sub_pd(qr, pr));
    e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

    // scale by 2^n; n in [-1011, 0] keeps the exponent field normal
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i pow2 =
        _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(e, _mm256_castsi256_pd(pow2));
}

inline double hsum_pd(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline double scalar_tail(KernelFamily family, double inv_scale,
                          const PointsSoA& x, std::size_t s, const PointsSoA& y,
                          std::size_t t_begin, std::size_t t_end) {
    double sum = 0.0;
    for (std::size_t t = t_begin; t < t_end; ++t) {
        double dist_sq = 0.0;
        for (std::size_t k = 0; k < x.d; ++k) {
            const double diff = x.dim(k)[s] - y.dim(k)[t];
            dist_sq += diff * diff;
        }
        const double arg = family == KernelFamily::gaussian_rbf
                               ? dist_sq * inv_scale
                               : std::sqrt(dist_sq) * inv_scale;
        sum += std::exp(-arg);
    }
    return sum;
}

// Sum of g(x_s, y_t) over t in [t_begin, t_end), vectorized over t.
inline double row_sum(KernelFamily family, double inv_scale, const PointsSoA& x,
                      std::size_t s, const PointsSoA& y, std::size_t t_begin,
                      std::size_t t_end) {
    const __m256d neg_inv = _mm256_set1_pd(-inv_scale);
    __m256d acc = _mm256_setzero_pd();
    std::size_t t = t_begin;
    for (; t + 4 <= t_end; t += 4) {
        __m256d dist_sq = _mm256_setzero_pd();
        for (std::size_t k = 0; k < x.d; ++k) {
            const __m256d xs = _mm256_set1_pd(x.dim(k)[s]);
            const __m256d yt = _mm256_loadu_pd(y.dim(k) + t);
            const __m256d diff = _mm256_sub_pd(xs, yt);
            dist_sq = _mm256_fmadd_pd(diff, diff, dist_sq);
        }
        const __m256d arg = family == KernelFamily::gaussian_rbf
                                ? _mm256_mul_pd(dist_sq, neg_inv)
                                : _mm256_mul_pd(_mm256_sqrt_pd(dist_sq), neg_inv);
        acc = _mm256_add_pd(acc, exp_pd(arg));
    }
    return hsum_pd(acc) + scalar_tail(family, inv_scale, x, s, y, t, t_end);
}

inline double inv_scale_for(KernelFamily family, double bandwidth) {
    return family == KernelFamily::gaussian_rbf ? 1.0 / (bandwidth * bandwidth)
                                                : 1.0 / bandwidth;
}

double cross_sum_avx2(KernelFamily family, double bandwidth, const PointsSoA& x,
                      const PointsSoA& y) {
    const double inv = inv_scale_for(family, bandwidth);
    double sum = 0.0;
    for (std::size_t s = 0; s < x.n; ++s) {
        sum += row_sum(family, inv, x, s, y, 0, y.n);
    }
    return sum;
}

double self_sum_avx2(KernelFamily family, double bandwidth, const PointsSoA& x) {
    const double inv = inv_scale_for(family, bandwidth);
    double upper = 0.0;
    for (std::size_t s = 0; s < x.n; ++s) {
        upper += row_sum(family, inv, x, s, x, s + 1, x.n);
    }
    return 2.0 * upper + static_cast<double>(x.n);
}

}  // namespace

const Kernels* avx2_kernels() {
    static const Kernels kernels{"avx2", &cross_sum_avx2, &self_sum_avx2};
    static const bool supported =
        __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &kernels : nullptr;
}

}  // namespace kabc::gram

#else  // !KABC_GRAM_X86

namespace kabc::gram {

const Kernels* avx2_kernels() { return nullptr; }

}  // namespace kabc::gram

#endif
