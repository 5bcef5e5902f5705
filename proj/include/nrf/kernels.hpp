#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference and, where
// the build and CPU allow, an AVX2 variant. Variants perform the same
// floating-point operations in the same order, so results are bit-identical
// across instruction sets.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace nrf::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

// One SLIC cluster center in unscaled Lab + pixel coordinates.
struct SlicCenter {
    float l, a, b, x, y;
};

struct KernelSet {
    Isa isa;

    // out[j] = sum_d |query[d] - targets[d * stride + j]| for j < count.
    // Targets are stored component-major (structure of arrays).
    void (*l1_to_many)(const double* query, std::size_t dim, const double* targets, std::size_t stride,
                       std::size_t count, double* out);

    // SLIC assignment along one row span starting at column x0:
    // d = dL^2 + da^2 + db^2 + spatial_weight * (dx^2 + dy^2);
    // where d < dist[i], dist[i] = d and label[i] = center_label.
    void (*slic_assign_span)(const float* L, const float* A, const float* B, int x0, int count, float y,
                             const SlicCenter& center, float spatial_weight, std::int32_t center_label,
                             float* dist, std::int32_t* label);

    // out[i] = values[i] >= threshold ? 1 : 0.
    void (*threshold_ge)(const double* values, std::size_t count, double threshold, std::uint8_t* out);

    // dst[i] |= src[i] / dst[i] &= src[i] over bytes.
    void (*or_into)(std::uint8_t* dst, const std::uint8_t* src, std::size_t count);
    void (*and_into)(std::uint8_t* dst, const std::uint8_t* src, std::size_t count);
};

const KernelSet& scalar_kernels();

// True when the AVX2 variants were compiled in and the running CPU supports them.
bool avx2_available();

// Throws std::runtime_error if `isa` is not available.
const KernelSet& kernels_for(Isa isa);

// Best available set; NRF_PROP_ISA=scalar forces the reference kernels.
const KernelSet& active();

}  // namespace nrf::kernels
