#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_internal.hpp"

namespace nrf::kernels {

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool avx2_available() {
#if defined(NRF_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported;
#else
    return false;
#endif
}

const KernelSet& kernels_for(Isa isa) {
    switch (isa) {
        case Isa::scalar: return scalar_kernels();
        case Isa::avx2:
#if defined(NRF_HAVE_AVX2)
            if (avx2_available()) return detail::avx2_kernels();
#endif
            throw std::runtime_error("AVX2 kernels are not available on this build or CPU");
    }
    throw std::runtime_error("unknown instruction set");
}

const KernelSet& active() {
    static const KernelSet& chosen = [&]() -> const KernelSet& {
        const char* forced = std::getenv("NRF_PROP_ISA");
        if (forced != nullptr && std::string(forced) == "scalar") return scalar_kernels();
        return avx2_available() ? kernels_for(Isa::avx2) : scalar_kernels();
    }();
    return chosen;
}

}  // namespace nrf::kernels
