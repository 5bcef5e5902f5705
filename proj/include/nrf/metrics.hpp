#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nrf/imaging.hpp"

namespace nrf {

struct FrameScore {
    double precision = 0.0;
    double recall = 0.0;
    double iou = 0.0;
};

// Empty-set conventions: |M| = 0 gives P = 1 iff |G| = 0; |G| = 0 gives
// R = 1; |M u G| = 0 gives IoU = 1.
FrameScore frame_eval(const BinaryMask& mask, const BinaryMask& gt);

struct VideoFrames {
    std::string id;
    std::vector<FrameScore> frames;
    std::optional<double> stability;  // absent for videos with fewer than two evaluated frames
};

struct VideoEval {
    std::string id;
    double precision = 0.0;
    double recall = 0.0;
    double iou = 0.0;
    std::optional<double> stability;
};

struct DatasetEval {
    std::vector<VideoEval> per_video;
    double mAP = 0.0;
    double mAR = 0.0;
    double f_beta = 0.0;
    double mIoU = 0.0;
    std::optional<double> mT;  // mean over videos that have a stability value
};

inline constexpr double kBetaSquared = 0.3;

// Mean within each video, then the unweighted mean across videos.
DatasetEval dataset_eval(std::span<const VideoFrames> videos, double beta_sq = kBetaSquared);

// (1 + b2) P R / (b2 P + R); 0 when both are 0.
double f_beta(double precision, double recall, double beta_sq = kBetaSquared);

// Mean over consecutive pairs of |M_t xor M_t+1| / max(1, |M_t| + |M_t+1|).
// Not comparable with other published temporal-stability numbers.
double temporal_stability_variant(std::span<const BinaryMask> masks);

}  // namespace nrf
