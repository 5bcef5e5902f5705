#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nrf/imaging.hpp"

namespace nrf {

// Partition of a frame into `count` labeled regions.
struct SuperpixelGrid {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;  // per pixel, in [0, count)
    int count = 0;
    std::vector<std::int64_t> areas;   // per label pixel counts

    std::int32_t label(int x, int y) const { return labels[std::size_t(y) * std::size_t(width) + std::size_t(x)]; }
    friend bool operator==(const SuperpixelGrid&, const SuperpixelGrid&) = default;
};

struct SlicParams {
    int target_count = 300;
    double compactness = 10.0;  // on the unscaled Lab scale (L* in 0..100)
    int max_iters = 10;
};

// Standard SLIC: grid-seeded centers in labxy space, local k-means over 2S x 2S
// windows with D^2 = d_lab^2 + (compactness/S)^2 d_xy^2, then connectivity
// enforcement. Deterministic.
SuperpixelGrid slic(const RgbFrame& frame, const SlicParams& params);

// Splits every label into its 4-connected components, merges components
// smaller than min_size into their largest 4-adjacent component and
// re-compacts labels in raster order of first appearance.
SuperpixelGrid enforce_connectivity(int width, int height, const std::vector<std::int32_t>& labels,
                                    std::int64_t min_size);

// Builds a grid (areas, count) from a compact labeling; throws if a label in
// [0, max+1) is unused.
SuperpixelGrid make_grid(int width, int height, std::vector<std::int32_t> labels);

// 16-bit grayscale label image.
void save_label_map(const SuperpixelGrid& grid, const std::filesystem::path& path);
// Frame copy with region boundaries painted in `color`.
RgbFrame boundary_overlay(const RgbFrame& frame, const SuperpixelGrid& grid, const Rgb& color = {1.0, 1.0, 0.0});

}  // namespace nrf
