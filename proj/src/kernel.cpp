#include "kabc/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kabc {

void KernelSpec::validate() const {
    if (!(bandwidth > 0.0)) {
        throw std::invalid_argument("kernel bandwidth must be positive, got " +
                                    std::to_string(bandwidth));
    }
    if (dimension == 0) {
        throw std::invalid_argument("kernel dimension must be >= 1");
    }
}

double evaluate(const KernelSpec& kernel, std::span<const double> x,
                std::span<const double> y) {
    if (x.size() != kernel.dimension || y.size() != kernel.dimension) {
        throw std::invalid_argument(
            "kernel evaluate: point dimension mismatch (kernel expects " +
            std::to_string(kernel.dimension) + ", got " +
            std::to_string(x.size()) + " and " + std::to_string(y.size()) + ")");
    }
    double dist_sq = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double diff = x[k] - y[k];
        dist_sq += diff * diff;
    }
    switch (kernel.family) {
        case KernelFamily::gaussian_rbf:
            return std::exp(-dist_sq / (kernel.bandwidth * kernel.bandwidth));
        case KernelFamily::laplacian:
            return std::exp(-std::sqrt(dist_sq) / kernel.bandwidth);
    }
    throw std::logic_error("kernel evaluate: unhandled family");
}

KernelBounds kernel_bounds(const KernelSpec& kernel) {
    kernel.validate();
    // Both families attain sup = 1 on the diagonal and decay to 0 at infinity,
    // so over the full (unbounded) domain the range equals the supremum.
    return KernelBounds{1.0, 1.0};
}

std::string_view family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::gaussian_rbf: return "gaussian-rbf";
        case KernelFamily::laplacian: return "laplacian";
    }
    return "unknown";
}

std::optional<KernelFamily> family_from_name(std::string_view name) {
    if (name == "gaussian-rbf") return KernelFamily::gaussian_rbf;
    if (name == "laplacian") return KernelFamily::laplacian;
    return std::nullopt;
}

}  // namespace kabc
