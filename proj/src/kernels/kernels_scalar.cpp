#include <cmath>

#include "kernels_internal.hpp"

namespace nrf::kernels {
namespace {

void l1_to_many(const double* query, std::size_t dim, const double* targets, std::size_t stride, std::size_t count,
                double* out) {
    for (std::size_t j = 0; j < count; ++j) {
        double acc = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            acc += std::fabs(query[d] - targets[d * stride + j]);
        }
        out[j] = acc;
    }
}

void slic_assign_span(const float* L, const float* A, const float* B, int x0, int count, float y,
                      const SlicCenter& c, float spatial_weight, std::int32_t center_label, float* dist,
                      std::int32_t* label) {
    const float dy = y - c.y;
    const float dy2 = dy * dy;
    for (int i = 0; i < count; ++i) {
        const float dl = L[i] - c.l;
        const float da = A[i] - c.a;
        const float db = B[i] - c.b;
        const float dx = static_cast<float>(x0 + i) - c.x;
        const float color = dl * dl + da * da + db * db;
        const float space = dx * dx + dy2;
        const float d = color + spatial_weight * space;
        if (d < dist[i]) {
            dist[i] = d;
            label[i] = center_label;
        }
    }
}

void threshold_ge(const double* values, std::size_t count, double threshold, std::uint8_t* out) {
    for (std::size_t i = 0; i < count; ++i) out[i] = values[i] >= threshold ? 1 : 0;
}

void or_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) dst[i] |= src[i];
}

void and_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) dst[i] &= src[i];
}

constexpr KernelSet kScalar{Isa::scalar, l1_to_many, slic_assign_span, threshold_ge, or_into, and_into};

}  // namespace

const KernelSet& scalar_kernels() { return kScalar; }

}  // namespace nrf::kernels
