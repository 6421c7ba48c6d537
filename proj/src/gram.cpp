#include <atomic>
#include <stdexcept>

#include "kabc/gram.hpp"

namespace kabc::gram {
namespace {

std::atomic<const Kernels*> g_active{nullptr};

const Kernels* detect() {
    if (const Kernels* avx2 = avx2_kernels()) return avx2;
    return &scalar_kernels();
}

}  // namespace

const Kernels& active() {
    const Kernels* kernels = g_active.load(std::memory_order_acquire);
    if (kernels == nullptr) {
        kernels = detect();
        g_active.store(kernels, std::memory_order_release);
    }
    return *kernels;
}

void set_dispatch(Dispatch dispatch) {
    switch (dispatch) {
        case Dispatch::automatic:
            g_active.store(detect(), std::memory_order_release);
            return;
        case Dispatch::scalar:
            g_active.store(&scalar_kernels(), std::memory_order_release);
            return;
        case Dispatch::avx2: {
            const Kernels* avx2 = avx2_kernels();
            if (avx2 == nullptr) {
                throw std::runtime_error(
                    "avx2 gram kernels unavailable on this CPU/build");
            }
            g_active.store(avx2, std::memory_order_release);
            return;
        }
    }
    throw std::logic_error("set_dispatch: unhandled dispatch mode");
}

}  // namespace kabc::gram
