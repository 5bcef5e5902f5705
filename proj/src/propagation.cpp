#include "nrf/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nrf/kernels.hpp"

namespace nrf {

ScoreVector init_scores(const ScalarMap& map, const SuperpixelGrid& grid) {
    if (!map.same_shape(grid.width, grid.height))
        throw std::invalid_argument("init_scores: map and superpixel grid dimensions differ");
    ScoreVector sums(std::size_t(grid.count), 0.0);
    for (std::size_t p = 0; p < map.size(); ++p) sums[std::size_t(grid.labels[p])] += map.data[p];
    for (int i = 0; i < grid.count; ++i) sums[std::size_t(i)] /= double(grid.areas[std::size_t(i)]);
    return sums;
}

ScoreVector propagate(const FlowMatrix& flow, std::span<const double> scores) {
    if (std::size_t(flow.cols) != scores.size()) throw std::invalid_argument("propagate: flow columns != score count");
    ScoreVector out(std::size_t(flow.rows), 0.0);
    for (int i = 0; i < flow.rows; ++i) {
        double acc = 0.0;
        for (std::size_t k = flow.row_ptr[std::size_t(i)]; k < flow.row_ptr[std::size_t(i) + 1]; ++k)
            acc += flow.values[k] * scores[std::size_t(flow.col_idx[k])];
        out[std::size_t(i)] = acc;
    }
    return out;
}

ScoreVector refine(std::span<const double> own, std::span<const ScoreVector> propagated, double lambda_c) {
    if (!(lambda_c >= 0.0)) throw std::invalid_argument("refine: lambda_c must be non-negative");
    for (const auto& p : propagated)
        if (p.size() != own.size()) throw std::invalid_argument("refine: score vector length mismatch");
    if (propagated.empty()) return ScoreVector(own.begin(), own.end());

    const std::size_t n = own.size();
    ScoreVector sum(n, 0.0);
    for (const auto& p : propagated)
        for (std::size_t i = 0; i < n; ++i) sum[i] += p[i];

    ScoreVector out(n);
    const double count = double(propagated.size());
    if (std::isinf(lambda_c)) {
        for (std::size_t i = 0; i < n; ++i) out[i] = sum[i] / count;
    } else {
        const double denom = 1.0 + lambda_c * count;
        for (std::size_t i = 0; i < n; ++i) out[i] = (own[i] + lambda_c * sum[i]) / denom;
    }
    return out;
}

ScalarMap importance_map(const SuperpixelGrid& grid, std::span<const double> fg, std::span<const double> bg) {
    if (fg.size() != std::size_t(grid.count) || bg.size() != std::size_t(grid.count))
        throw std::invalid_argument("importance_map: score count != superpixel count");
    ScoreVector per_region(std::size_t(grid.count));
    for (std::size_t i = 0; i < per_region.size(); ++i) per_region[i] = fg[i] * (1.0 - bg[i]);
    ScalarMap map(grid.width, grid.height);
    for (std::size_t p = 0; p < map.size(); ++p) map.data[p] = per_region[std::size_t(grid.labels[p])];
    return map;
}

BinaryMask binarize(const ScalarMap& map, double ratio) {
    if (!(ratio > 0.0 && ratio <= 1.0)) throw std::invalid_argument("binarize: ratio must lie in (0, 1]");
    BinaryMask mask(map.width, map.height, 0);
    if (map.empty()) return mask;
    const double peak = *std::max_element(map.data.begin(), map.data.end());
    if (!(peak > 0.0)) return mask;
    kernels::active().threshold_ge(map.data.data(), map.size(), ratio * peak, mask.data.data());
    return mask;
}

}  // namespace nrf
