#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nrf/imaging.hpp"
#include "nrf/superpixel.hpp"

namespace nrf {

// Which color spaces contribute to the superpixel descriptor.
struct ColorSpaces {
    bool rgb = true;
    bool lab = true;
    bool hsv = true;

    int count() const { return int(rgb) + int(lab) + int(hsv); }
    bool empty() const { return count() == 0; }
    std::string to_string() const;
    // Comma-separated subset of {rgb, lab, hsv}; throws std::invalid_argument.
    static ColorSpaces parse(std::string_view text);
    friend bool operator==(const ColorSpaces&, const ColorSpaces&) = default;
};

// Row-major descriptors: per superpixel the selected color means (RGB, Lab,
// HSV order) followed by the normalized centroid (x, y). All components in [0,1].
struct SuperpixelFeatures {
    int count = 0;
    int dim = 0;
    std::vector<double> data;

    std::span<const double> row(int i) const {
        return {data.data() + std::size_t(i) * std::size_t(dim), std::size_t(dim)};
    }
};

SuperpixelFeatures describe(const RgbFrame& frame, const SuperpixelGrid& grid, const ColorSpaces& spaces);

double l1_distance(std::span<const double> a, std::span<const double> b);
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// One comma-separated row per superpixel.
void save_descriptors_csv(const SuperpixelFeatures& features, const std::filesystem::path& path);

}  // namespace nrf
