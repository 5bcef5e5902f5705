#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "nrf/features.hpp"
#include "nrf/flow.hpp"
#include "nrf/imaging.hpp"
#include "nrf/propagation.hpp"
#include "nrf/superpixel.hpp"

namespace nrf {

inline constexpr double kInfiniteCoupling = std::numeric_limits<double>::infinity();

struct PropagationConfig {
    double lambda_c = 0.5;  // may be kInfiniteCoupling
    int k0 = 15;
    int dk = 5;
    double threshold_ratio = 0.2;
    int closing_radius = 3;
    SlicParams slic{};
    ColorSpaces spaces{};
    FlowMode flow_mode = FlowMode::reversible;

    // Throws std::invalid_argument naming the first offending field.
    void validate() const;
};

struct StageTimings {
    double superpixel_s = 0.0;
    double features_s = 0.0;  // descriptors and score initialization
    double flow_s = 0.0;
    double propagation_s = 0.0;  // propagation, refinement, fusion, binarization, closing

    double total() const { return superpixel_s + features_s + flow_s + propagation_s; }
};

struct FrameState {
    SuperpixelGrid grid;
    SuperpixelFeatures features;
    ScoreVector fg_init, bg_init;
    std::vector<int> refs;
    std::vector<ScoreVector> fg_propagated, bg_propagated;  // one per ref
    ScoreVector fg_refined, bg_refined;
    ScalarMap importance;
    std::vector<std::pair<int, FlowMatrix>> flows;  // kept only on request
};

struct VideoResult {
    std::vector<BinaryMask> masks;
    std::vector<StageTimings> timings;
    std::vector<FrameState> frames;
};

struct RunOptions {
    int workers = 1;
    bool keep_flows = false;
};

// Superpixels, descriptors and initial scores per frame, then per frame:
// flows to the keyframe set, propagation, closed-form refinement of both
// score vectors, importance map, adaptive binarization, closing.
// Maps whose size differs from their frame are resampled bilinearly.
// Output does not depend on the worker count.
VideoResult run_video(const std::vector<RgbFrame>& frames, const std::vector<ScalarMap>& fg_maps,
                      const std::vector<ScalarMap>& bg_maps, const PropagationConfig& config,
                      const RunOptions& options = {});

}  // namespace nrf
