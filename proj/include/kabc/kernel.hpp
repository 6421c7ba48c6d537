#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

// Bounded translation-invariant kernels g(x, y) = Psi(x - y) on R^d and the
// constants that enter the concentration thresholds:
//   sup   = sup_{x,y} g(x,y)
//   range = sup_{x,y} g(x,y) - inf_{x,y} g(x,y)
// Both built-in families are characteristic on R^d, which the graph tests
// require; this is a property of the family and is not checked at runtime.

namespace kabc {

enum class KernelFamily {
    gaussian_rbf,  // exp(-|x-y|_2^2 / bandwidth^2)
    laplacian,     // exp(-|x-y|_2   / bandwidth)
};

struct KernelSpec {
    KernelFamily family{KernelFamily::gaussian_rbf};
    double bandwidth{1.0};
    std::size_t dimension{1};

    // Throws std::invalid_argument if bandwidth <= 0 or dimension == 0.
    void validate() const;
};

struct KernelBounds {
    double sup;    // attained on the diagonal for both families
    double range;  // infimum over the full domain is 0 in the limit
};

// Kernel value Psi(x - y). Throws std::invalid_argument on dimension mismatch.
double evaluate(const KernelSpec& kernel, std::span<const double> x,
                std::span<const double> y);

KernelBounds kernel_bounds(const KernelSpec& kernel);

std::string_view family_name(KernelFamily family);
std::optional<KernelFamily> family_from_name(std::string_view name);

}  // namespace kabc
