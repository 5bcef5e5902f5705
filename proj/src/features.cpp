#include "nrf/features.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "nrf/error.hpp"

namespace nrf {

std::string ColorSpaces::to_string() const {
    std::string out;
    auto add = [&](bool on, const char* name) {
        if (!on) return;
        if (!out.empty()) out += ',';
        out += name;
    };
    add(rgb, "rgb");
    add(lab, "lab");
    add(hsv, "hsv");
    return out;
}

ColorSpaces ColorSpaces::parse(std::string_view text) {
    ColorSpaces spaces{false, false, false};
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string_view item = text.substr(pos, comma - pos);
        if (item == "rgb") spaces.rgb = true;
        else if (item == "lab") spaces.lab = true;
        else if (item == "hsv") spaces.hsv = true;
        else if (!item.empty()) throw std::invalid_argument(fmt::format("unknown color space '{}'", item));
        pos = comma + 1;
    }
    if (spaces.empty()) throw std::invalid_argument("at least one color space is required");
    return spaces;
}

SuperpixelFeatures describe(const RgbFrame& frame, const SuperpixelGrid& grid, const ColorSpaces& spaces) {
    if (spaces.empty()) throw std::invalid_argument("describe: no color space selected");
    if (frame.width != grid.width || frame.height != grid.height)
        throw std::invalid_argument("describe: frame and superpixel grid dimensions differ");

    SuperpixelFeatures f;
    f.count = grid.count;
    f.dim = 3 * spaces.count() + 2;
    f.data.assign(std::size_t(f.count) * std::size_t(f.dim), 0.0);

    const double sx = grid.width > 1 ? 1.0 / double(grid.width - 1) : 0.0;
    const double sy = grid.height > 1 ? 1.0 / double(grid.height - 1) : 0.0;
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) {
            const std::size_t p = std::size_t(y) * std::size_t(grid.width) + std::size_t(x);
            double* d = f.data.data() + std::size_t(grid.labels[p]) * std::size_t(f.dim);
            const Rgb rgb = frame.rgb(p);
            auto add = [&d](const Rgb& c) {
                d[0] += c[0];
                d[1] += c[1];
                d[2] += c[2];
                d += 3;
            };
            if (spaces.rgb) add(rgb);
            if (spaces.lab) add(rgb_to_lab(rgb));
            if (spaces.hsv) add(rgb_to_hsv(rgb));
            d[0] += double(x) * sx;
            d[1] += double(y) * sy;
        }
    }
    for (int i = 0; i < f.count; ++i) {
        const double inv = 1.0 / double(grid.areas[std::size_t(i)]);
        for (int k = 0; k < f.dim; ++k) {
            double& v = f.data[std::size_t(i) * std::size_t(f.dim) + std::size_t(k)];
            v = std::min(1.0, v * inv);
        }
    }
    return f;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("l1_distance: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
    return acc;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("cosine_similarity: length mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) throw std::invalid_argument("cosine_similarity: zero vector");
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

void save_descriptors_csv(const SuperpixelFeatures& features, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    for (int i = 0; i < features.count; ++i) {
        const auto row = features.row(i);
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << fmt::format("{:.17g}", row[k]);
        out << '\n';
    }
}

}  // namespace nrf
