#pragma once

#include "nrf/kernels.hpp"

namespace nrf::kernels::detail {

#if defined(NRF_HAVE_AVX2)
const KernelSet& avx2_kernels();
#endif

}  // namespace nrf::kernels::detail
