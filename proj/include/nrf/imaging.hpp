#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace nrf {

// Dense row-major single-plane grid.
template <class T>
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Plane() = default;
    Plane(int w, int h, T fill = T{}) : width(w), height(h), data(std::size_t(w) * std::size_t(h), fill) {}

    std::size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }
    T& at(int x, int y) { return data[std::size_t(y) * std::size_t(width) + std::size_t(x)]; }
    const T& at(int x, int y) const { return data[std::size_t(y) * std::size_t(width) + std::size_t(x)]; }
    bool same_shape(int w, int h) const { return width == w && height == h; }
    template <class U>
    bool same_shape(const Plane<U>& other) const { return width == other.width && height == other.height; }

    friend bool operator==(const Plane&, const Plane&) = default;
};

// Per-pixel values in [0,1]: foregroundness, backgroundness, ground truth,
// importance maps.
using ScalarMap = Plane<double>;
// Unbounded real field with map geometry (loss gradients).
using Field = Plane<double>;
// Bits stored as 0/1 bytes.
using BinaryMask = Plane<std::uint8_t>;

using Rgb = std::array<double, 3>;

// Interleaved r,g,b per pixel, each channel in [0,1].
struct RgbFrame {
    int width = 0;
    int height = 0;
    std::vector<float> pixels;

    RgbFrame() = default;
    RgbFrame(int w, int h) : width(w), height(h), pixels(std::size_t(w) * std::size_t(h) * 3, 0.0f) {}

    std::size_t pixel_count() const { return std::size_t(width) * std::size_t(height); }
    Rgb rgb(std::size_t p) const { return {pixels[3 * p], pixels[3 * p + 1], pixels[3 * p + 2]}; }
    void set(int x, int y, const Rgb& c) {
        const std::size_t p = std::size_t(y) * std::size_t(width) + std::size_t(x);
        pixels[3 * p] = float(c[0]);
        pixels[3 * p + 1] = float(c[1]);
        pixels[3 * p + 2] = float(c[2]);
    }
};

RgbFrame load_frame(const std::filesystem::path& path);
void save_frame(const RgbFrame& frame, const std::filesystem::path& path);

// Reads an 8-bit single-channel image as intensity/255. Color images are
// rejected unless `luminance` is set, in which case they are converted to gray.
ScalarMap load_scalar_map(const std::filesystem::path& path, bool luminance = false);

void save_scalar_map(const ScalarMap& map, const std::filesystem::path& path);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);
BinaryMask load_mask(const std::filesystem::path& path);

// Bilinear resampling (pixel-center aligned).
ScalarMap resize_bilinear(const ScalarMap& map, int width, int height);

// CIE L*a*b* under D65 from sRGB, rescaled to [0,1] as (L*/100, (a*+128)/255, (b*+128)/255).
Rgb rgb_to_lab(const Rgb& rgb);
// Unscaled CIE L*a*b* (L* in [0,100]).
Rgb rgb_to_lab_raw(const Rgb& rgb);
// Hexcone HSV with hue/360; hue of an achromatic color is 0.
Rgb rgb_to_hsv(const Rgb& rgb);
Rgb hsv_to_rgb(const Rgb& hsv);

// Offsets (dx, dy) with dx*dx + dy*dy <= radius*radius.
std::vector<std::array<int, 2>> disk_offsets(int radius);

// Out-of-frame pixels are ignored by both passes, so full masks stay full.
BinaryMask dilate(const BinaryMask& mask, int radius);
BinaryMask erode(const BinaryMask& mask, int radius);
BinaryMask morphological_close(const BinaryMask& mask, int radius);

std::size_t count_ones(const BinaryMask& mask);

}  // namespace nrf
