// Compiled with -mavx2 (no FMA) so that every variant rounds exactly like
// the scalar reference.
#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace nrf::kernels::detail {
namespace {

void l1_to_many(const double* query, std::size_t dim, const double* targets, std::size_t stride, std::size_t count,
                double* out) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t j = 0;
    for (; j + 8 <= count; j += 8) {
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        for (std::size_t d = 0; d < dim; ++d) {
            const __m256d q = _mm256_set1_pd(query[d]);
            const double* row = targets + d * stride + j;
            acc0 = _mm256_add_pd(acc0, _mm256_andnot_pd(sign, _mm256_sub_pd(q, _mm256_loadu_pd(row))));
            acc1 = _mm256_add_pd(acc1, _mm256_andnot_pd(sign, _mm256_sub_pd(q, _mm256_loadu_pd(row + 4))));
        }
        _mm256_storeu_pd(out + j, acc0);
        _mm256_storeu_pd(out + j + 4, acc1);
    }
    for (; j + 4 <= count; j += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t d = 0; d < dim; ++d) {
            const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(query[d]), _mm256_loadu_pd(targets + d * stride + j));
            acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, diff));
        }
        _mm256_storeu_pd(out + j, acc);
    }
    for (; j < count; ++j) {
        double acc = 0.0;
        for (std::size_t d = 0; d < dim; ++d) acc += std::fabs(query[d] - targets[d * stride + j]);
        out[j] = acc;
    }
}

void slic_assign_span(const float* L, const float* A, const float* B, int x0, int count, float y,
                      const SlicCenter& c, float spatial_weight, std::int32_t center_label, float* dist,
                      std::int32_t* label) {
    const float dy = y - c.y;
    const float dy2 = dy * dy;
    const __m256 cl = _mm256_set1_ps(c.l);
    const __m256 ca = _mm256_set1_ps(c.a);
    const __m256 cb = _mm256_set1_ps(c.b);
    const __m256 cx = _mm256_set1_ps(c.x);
    const __m256 vdy2 = _mm256_set1_ps(dy2);
    const __m256 w = _mm256_set1_ps(spatial_weight);
    const __m256i lab = _mm256_set1_epi32(center_label);
    const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);

    int i = 0;
    for (; i + 8 <= count; i += 8) {
        const __m256 dl = _mm256_sub_ps(_mm256_loadu_ps(L + i), cl);
        const __m256 da = _mm256_sub_ps(_mm256_loadu_ps(A + i), ca);
        const __m256 db = _mm256_sub_ps(_mm256_loadu_ps(B + i), cb);
        const __m256 xs = _mm256_cvtepi32_ps(_mm256_add_epi32(_mm256_set1_epi32(x0 + i), lane));
        const __m256 dx = _mm256_sub_ps(xs, cx);
        __m256 color = _mm256_mul_ps(dl, dl);
        color = _mm256_add_ps(color, _mm256_mul_ps(da, da));
        color = _mm256_add_ps(color, _mm256_mul_ps(db, db));
        const __m256 space = _mm256_add_ps(_mm256_mul_ps(dx, dx), vdy2);
        const __m256 d = _mm256_add_ps(color, _mm256_mul_ps(w, space));

        const __m256 old = _mm256_loadu_ps(dist + i);
        const __m256 better = _mm256_cmp_ps(d, old, _CMP_LT_OQ);
        _mm256_storeu_ps(dist + i, _mm256_blendv_ps(old, d, better));
        _mm256_maskstore_epi32(label + i, _mm256_castps_si256(better), lab);
    }
    for (; i < count; ++i) {
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
    const __m256d t = _mm256_set1_pd(threshold);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const int bits = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(values + i), t, _CMP_GE_OQ));
        out[i] = std::uint8_t(bits & 1);
        out[i + 1] = std::uint8_t((bits >> 1) & 1);
        out[i + 2] = std::uint8_t((bits >> 2) & 1);
        out[i + 3] = std::uint8_t((bits >> 3) & 1);
    }
    for (; i < count; ++i) out[i] = values[i] >= threshold ? 1 : 0;
}

void or_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t count) {
    std::size_t i = 0;
    for (; i + 32 <= count; i += 32) {
        const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_or_si256(a, b));
    }
    for (; i < count; ++i) dst[i] |= src[i];
}

void and_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t count) {
    std::size_t i = 0;
    for (; i + 32 <= count; i += 32) {
        const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_and_si256(a, b));
    }
    for (; i < count; ++i) dst[i] &= src[i];
}

constexpr KernelSet kAvx2{Isa::avx2, l1_to_many, slic_assign_span, threshold_ge, or_into, and_into};

}  // namespace

const KernelSet& avx2_kernels() { return kAvx2; }

}  // namespace nrf::kernels::detail
