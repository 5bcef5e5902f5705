#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace nrf::testing {

RgbFrame textured_frame(int width, int height, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> noise(-0.04, 0.04);
    RgbFrame frame(width, height);
    const double two_pi = 2.0 * std::numbers::pi;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double u = double(x) / width, v = double(y) / height;
            const double stripes = 0.15 * std::sin(two_pi * (3.0 * u + 2.0 * v));
            const double blobs = 0.2 * std::sin(two_pi * 2.0 * u) * std::cos(two_pi * 1.5 * v);
            const Rgb c{std::clamp(0.2 + 0.5 * u + stripes + noise(rng), 0.0, 1.0),
                        std::clamp(0.3 + 0.4 * v + blobs + noise(rng), 0.0, 1.0),
                        std::clamp(0.6 - 0.3 * u + 0.2 * v - stripes + noise(rng), 0.0, 1.0)};
            frame.set(x, y, c);
        }
    }
    return frame;
}

RgbFrame uniform_frame(int width, int height, const Rgb& color) {
    RgbFrame frame(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) frame.set(x, y, color);
    return frame;
}

ScalarMap random_map(int width, int height, Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    ScalarMap map(width, height);
    for (double& v : map.data) v = dist(rng);
    return map;
}

SuperpixelFeatures random_features(int count, int dim, Rng& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    SuperpixelFeatures f{count, dim, std::vector<double>(std::size_t(count) * std::size_t(dim))};
    for (double& v : f.data) v = dist(rng);
    return f;
}

DistractorVideo distractor_video(int width, int height, int frame_count) {
    DistractorVideo video;
    const int side = height / 4;
    const int blob = height / 5;
    const int flicker = frame_count / 2 - 1;
    video.flicker_frames = {flicker, flicker + 1};
    const RgbFrame background = textured_frame(width, height, 7);

    for (int t = 0; t < frame_count; ++t) {
        const int sx = width / 5 + t;
        const int sy = height / 2 - side / 2;
        RgbFrame frame = background;
        ScalarMap fg(width, height, 0.02);
        BinaryMask gt(width, height, 0);
        for (int y = sy; y < sy + side; ++y) {
            for (int x = sx; x < sx + side; ++x) {
                frame.set(x, y, {0.85, 0.1, 0.12});
                fg.at(x, y) = 0.95;
                gt.at(x, y) = 1;
            }
        }
        if (t == video.flicker_frames[0] || t == video.flicker_frames[1]) {
            const int bx = width - width / 5 - blob, by = height / 5;
            for (int y = by; y < by + blob; ++y)
                for (int x = bx; x < bx + blob; ++x) fg.at(x, y) = 0.8;
        }
        ScalarMap bg = fg;
        for (double& v : bg.data) v = 1.0 - v;
        video.frames.push_back(std::move(frame));
        video.fg.push_back(std::move(fg));
        video.bg.push_back(std::move(bg));
        video.gt.push_back(std::move(gt));
    }
    return video;
}

std::string frame_stem(int index) { return fmt::format("f{:03d}", index); }

void write_video(const DistractorVideo& video, const std::filesystem::path& root) {
    for (const char* sub : {"frames", "fg", "bg", "gt"}) std::filesystem::create_directories(root / sub);
    for (std::size_t t = 0; t < video.frames.size(); ++t) {
        const std::string name = frame_stem(int(t)) + ".png";
        save_frame(video.frames[t], root / "frames" / name);
        save_scalar_map(video.fg[t], root / "fg" / name);
        save_scalar_map(video.bg[t], root / "bg" / name);
        save_mask(video.gt[t], root / "gt" / name);
    }
}

}  // namespace nrf::testing
