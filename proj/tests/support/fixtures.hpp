#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <random>
#include <vector>

#include "nrf/features.hpp"
#include "nrf/imaging.hpp"

namespace nrf::testing {

using Rng = std::mt19937_64;

// Smooth color ramps, sinusoidal stripes and a little seeded noise.
RgbFrame textured_frame(int width, int height, std::uint64_t seed);

RgbFrame uniform_frame(int width, int height, const Rgb& color);

ScalarMap random_map(int width, int height, Rng& rng, double lo = 0.0, double hi = 1.0);

SuperpixelFeatures random_features(int count, int dim, Rng& rng);

// A persistent square object drifting one pixel per frame over a textured
// background. Foreground maps are confident on the square; two frames carry
// an extra bright blob on the background (the flicker distractor). Background
// maps are 1 - foreground. Ground truth covers the square only.
struct DistractorVideo {
    std::vector<RgbFrame> frames;
    std::vector<ScalarMap> fg;
    std::vector<ScalarMap> bg;
    std::vector<BinaryMask> gt;
    std::vector<int> flicker_frames;
};

DistractorVideo distractor_video(int width = 200, int height = 112, int frame_count = 20);

// Frame stem used on disk: "f000", "f001", ...
std::string frame_stem(int index);

// Writes root/frames, root/fg, root/bg and root/gt as PNGs named by frame_stem.
void write_video(const DistractorVideo& video, const std::filesystem::path& root);

}  // namespace nrf::testing
