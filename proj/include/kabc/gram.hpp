#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "kabc/kernel.hpp"

// Gram-matrix reduction kernels. The O(n^2 d) pairwise kernel sums dominate
// the simulator's runtime, so they are implemented as scalar reference code
// plus a runtime-dispatched AVX2 variant. The two variants are equivalence
// tested against each other and against direct kernel evaluation.
//
// Points are handed to the backends in column-major (structure-of-arrays)
// layout so that the coordinates of consecutive points are contiguous.

namespace kabc::gram {

struct PointsSoA {
    std::vector<double> coords;  // coords[k * n + t] = coordinate k of point t
    std::size_t n = 0;
    std::size_t d = 0;

    // rows holds n points of dimension d, row-major.
    static PointsSoA from_row_major(std::span<const double> rows, std::size_t n,
                                    std::size_t d);

    const double* dim(std::size_t k) const { return coords.data() + k * n; }
};

struct Kernels {
    std::string_view name;
    // sum over all (s, t) in X x Y of g(x_s, y_t); nx * ny terms
    double (*cross_sum)(KernelFamily family, double bandwidth,
                        const PointsSoA& x, const PointsSoA& y);
    // sum over all (s, t) in X x X of g(x_s, x_t); n^2 terms incl. diagonal
    double (*self_sum)(KernelFamily family, double bandwidth,
                       const PointsSoA& x);
};

const Kernels& scalar_kernels();

// nullptr when the build target or the running CPU lacks AVX2+FMA.
const Kernels* avx2_kernels();

enum class Dispatch { automatic, scalar, avx2 };

// Backend used by the statistics layer; chosen once from CPU features,
// overridable for tests and benchmarks. Throws std::runtime_error when the
// requested variant is unavailable.
const Kernels& active();
void set_dispatch(Dispatch dispatch);

}  // namespace kabc::gram
