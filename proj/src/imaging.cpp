#include "nrf/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "nrf/error.hpp"
#include "nrf/kernels.hpp"

namespace nrf {
namespace fs = std::filesystem;

namespace {

void require_readable(const fs::path& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) throw InputError("missing file: " + path.string());
}

void require_writable_parent(const fs::path& path) {
    const fs::path parent = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    if (!fs::is_directory(parent, ec)) throw InputError("cannot write " + path.string() + ": no such directory");
}

void write_image(const cv::Mat& image, const fs::path& path) {
    require_writable_parent(path);
    bool ok = false;
    try {
        ok = cv::imwrite(path.string(), image);
    } catch (const cv::Exception& e) {
        throw InputError("cannot write " + path.string() + ": " + e.what());
    }
    if (!ok) throw InputError("cannot write " + path.string());
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

double srgb_to_linear(double c) { return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4); }

double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

// sRGB primaries and the CIE D65 reference white.
constexpr double kM[3][3] = {{0.412453, 0.357580, 0.180423},
                             {0.212671, 0.715160, 0.072169},
                             {0.019334, 0.119193, 0.950227}};
constexpr double kWhite[3] = {0.95047, 1.0, 1.08883};

}  // namespace

RgbFrame load_frame(const fs::path& path) {
    require_readable(path);
    const cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (bgr.empty()) throw InputError("cannot decode image: " + path.string());
    if (bgr.cols <= 0 || bgr.rows <= 0) throw InputError("zero-dimension image: " + path.string());
    RgbFrame frame(bgr.cols, bgr.rows);
    for (int y = 0; y < bgr.rows; ++y) {
        const auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            const std::size_t p = std::size_t(y) * std::size_t(bgr.cols) + std::size_t(x);
            frame.pixels[3 * p] = float(row[x][2]) / 255.0f;
            frame.pixels[3 * p + 1] = float(row[x][1]) / 255.0f;
            frame.pixels[3 * p + 2] = float(row[x][0]) / 255.0f;
        }
    }
    return frame;
}

void save_frame(const RgbFrame& frame, const fs::path& path) {
    cv::Mat bgr(frame.height, frame.width, CV_8UC3);
    for (int y = 0; y < frame.height; ++y) {
        auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < frame.width; ++x) {
            const Rgb c = frame.rgb(std::size_t(y) * std::size_t(frame.width) + std::size_t(x));
            row[x] = cv::Vec3b(to_byte(c[2]), to_byte(c[1]), to_byte(c[0]));
        }
    }
    write_image(bgr, path);
}

ScalarMap load_scalar_map(const fs::path& path, bool luminance) {
    require_readable(path);
    cv::Mat image = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (image.empty()) throw InputError("cannot decode image: " + path.string());
    if (image.depth() != CV_8U) throw InputError("expected an 8-bit map: " + path.string());
    if (image.channels() != 1) {
        if (!luminance) throw InputError("expected a single-channel map: " + path.string());
        cv::Mat gray;
        cv::cvtColor(image, gray, image.channels() == 4 ? cv::COLOR_BGRA2GRAY : cv::COLOR_BGR2GRAY);
        image = gray;
    }
    ScalarMap map(image.cols, image.rows);
    for (int y = 0; y < image.rows; ++y) {
        const auto* row = image.ptr<std::uint8_t>(y);
        for (int x = 0; x < image.cols; ++x) map.at(x, y) = double(row[x]) / 255.0;
    }
    return map;
}

void save_scalar_map(const ScalarMap& map, const fs::path& path) {
    cv::Mat image(map.height, map.width, CV_8UC1);
    for (int y = 0; y < map.height; ++y) {
        auto* row = image.ptr<std::uint8_t>(y);
        for (int x = 0; x < map.width; ++x) row[x] = to_byte(map.at(x, y));
    }
    write_image(image, path);
}

void save_mask(const BinaryMask& mask, const fs::path& path) {
    cv::Mat image(mask.height, mask.width, CV_8UC1);
    for (int y = 0; y < mask.height; ++y) {
        auto* row = image.ptr<std::uint8_t>(y);
        for (int x = 0; x < mask.width; ++x) row[x] = mask.at(x, y) ? 255 : 0;
    }
    write_image(image, path);
}

BinaryMask load_mask(const fs::path& path) {
    const ScalarMap map = load_scalar_map(path, true);
    BinaryMask mask(map.width, map.height);
    for (std::size_t i = 0; i < map.size(); ++i) mask.data[i] = map.data[i] >= 0.5 ? 1 : 0;
    return mask;
}

ScalarMap resize_bilinear(const ScalarMap& map, int width, int height) {
    if (map.same_shape(width, height)) return map;
    const cv::Mat src(map.height, map.width, CV_64FC1, const_cast<double*>(map.data.data()));
    cv::Mat dst;
    cv::resize(src, dst, cv::Size(width, height), 0, 0, cv::INTER_LINEAR);
    ScalarMap out(width, height);
    for (int y = 0; y < height; ++y) {
        const auto* row = dst.ptr<double>(y);
        for (int x = 0; x < width; ++x) out.at(x, y) = std::clamp(row[x], 0.0, 1.0);
    }
    return out;
}

Rgb rgb_to_lab_raw(const Rgb& rgb) {
    const double r = srgb_to_linear(rgb[0]);
    const double g = srgb_to_linear(rgb[1]);
    const double b = srgb_to_linear(rgb[2]);
    const double fx = lab_f((kM[0][0] * r + kM[0][1] * g + kM[0][2] * b) / kWhite[0]);
    const double fy = lab_f((kM[1][0] * r + kM[1][1] * g + kM[1][2] * b) / kWhite[1]);
    const double fz = lab_f((kM[2][0] * r + kM[2][1] * g + kM[2][2] * b) / kWhite[2]);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Rgb rgb_to_lab(const Rgb& rgb) {
    const Rgb lab = rgb_to_lab_raw(rgb);
    return {std::clamp(lab[0] / 100.0, 0.0, 1.0), std::clamp((lab[1] + 128.0) / 255.0, 0.0, 1.0),
            std::clamp((lab[2] + 128.0) / 255.0, 0.0, 1.0)};
}

Rgb rgb_to_hsv(const Rgb& rgb) {
    const auto [r, g, b] = rgb;
    const double hi = std::max({r, g, b});
    const double lo = std::min({r, g, b});
    const double delta = hi - lo;
    const double s = hi > 0.0 ? delta / hi : 0.0;
    double h = 0.0;
    if (delta > 0.0) {
        if (hi == r) {
            h = (g - b) / delta;
            if (h < 0.0) h += 6.0;
        } else if (hi == g) {
            h = (b - r) / delta + 2.0;
        } else {
            h = (r - g) / delta + 4.0;
        }
        h /= 6.0;
        if (h >= 1.0) h = 0.0;
    }
    return {h, s, hi};
}

Rgb hsv_to_rgb(const Rgb& hsv) {
    const auto [h, s, v] = hsv;
    const double sector = h * 6.0;
    const int i = static_cast<int>(std::floor(sector)) % 6;
    const double f = sector - std::floor(sector);
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    switch (i) {
        case 0: return {v, t, p};
        case 1: return {q, v, p};
        case 2: return {p, v, t};
        case 3: return {p, q, v};
        case 4: return {t, p, v};
        default: return {v, p, q};
    }
}

std::vector<std::array<int, 2>> disk_offsets(int radius) {
    std::vector<std::array<int, 2>> offsets;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= radius * radius) offsets.push_back({dx, dy});
    return offsets;
}

namespace {

// Accumulates shifted copies of `mask` into `out` with `combine`; offsets that
// fall outside the frame contribute nothing.
template <class Combine>
void accumulate_shifts(const BinaryMask& mask, int radius, BinaryMask& out, Combine combine) {
    const int w = mask.width;
    const int h = mask.height;
    for (const auto& [dx, dy] : disk_offsets(radius)) {
        const int x_lo = std::max(0, -dx);
        const int x_hi = std::min(w, w - dx);
        if (x_hi <= x_lo) continue;
        for (int y = std::max(0, -dy); y < std::min(h, h - dy); ++y) {
            combine(&out.at(x_lo, y), &mask.at(x_lo + dx, y + dy), std::size_t(x_hi - x_lo));
        }
    }
}

}  // namespace

BinaryMask dilate(const BinaryMask& mask, int radius) {
    if (radius < 1) throw std::invalid_argument("morphology radius must be >= 1");
    BinaryMask out(mask.width, mask.height, 0);
    accumulate_shifts(mask, radius, out, kernels::active().or_into);
    return out;
}

BinaryMask erode(const BinaryMask& mask, int radius) {
    if (radius < 1) throw std::invalid_argument("morphology radius must be >= 1");
    BinaryMask out(mask.width, mask.height, 1);
    accumulate_shifts(mask, radius, out, kernels::active().and_into);
    return out;
}

BinaryMask morphological_close(const BinaryMask& mask, int radius) { return erode(dilate(mask, radius), radius); }

std::size_t count_ones(const BinaryMask& mask) {
    return static_cast<std::size_t>(std::count_if(mask.data.begin(), mask.data.end(), [](auto b) { return b != 0; }));
}

}  // namespace nrf
