#include "nrf/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace nrf {

FrameScore frame_eval(const BinaryMask& mask, const BinaryMask& gt) {
    if (!mask.same_shape(gt)) throw std::invalid_argument("frame_eval: mask and ground truth dimensions differ");
    std::size_t m = 0, g = 0, both = 0;
    for (std::size_t p = 0; p < mask.size(); ++p) {
        const bool a = mask.data[p] != 0, b = gt.data[p] != 0;
        m += a;
        g += b;
        both += a && b;
    }
    const std::size_t either = m + g - both;
    FrameScore s;
    s.precision = m == 0 ? (g == 0 ? 1.0 : 0.0) : double(both) / double(m);
    s.recall = g == 0 ? 1.0 : double(both) / double(g);
    s.iou = either == 0 ? 1.0 : double(both) / double(either);
    return s;
}

double f_beta(double precision, double recall, double beta_sq) {
    const double denom = beta_sq * precision + recall;
    if (denom <= 0.0) return 0.0;
    return (1.0 + beta_sq) * precision * recall / denom;
}

DatasetEval dataset_eval(std::span<const VideoFrames> videos, double beta_sq) {
    if (videos.empty()) throw std::invalid_argument("dataset_eval: no videos");
    DatasetEval out;
    double stability_sum = 0.0;
    int stability_count = 0;
    for (const auto& video : videos) {
        if (video.frames.empty()) throw std::invalid_argument("dataset_eval: video '" + video.id + "' has no frames");
        VideoEval v;
        v.id = video.id;
        for (const auto& f : video.frames) {
            v.precision += f.precision;
            v.recall += f.recall;
            v.iou += f.iou;
        }
        const double n = double(video.frames.size());
        v.precision /= n;
        v.recall /= n;
        v.iou /= n;
        v.stability = video.stability;
        if (v.stability) {
            stability_sum += *v.stability;
            ++stability_count;
        }
        out.mAP += v.precision;
        out.mAR += v.recall;
        out.mIoU += v.iou;
        out.per_video.push_back(std::move(v));
    }
    const double k = double(videos.size());
    out.mAP /= k;
    out.mAR /= k;
    out.mIoU /= k;
    out.f_beta = f_beta(out.mAP, out.mAR, beta_sq);
    if (stability_count > 0) out.mT = stability_sum / stability_count;
    return out;
}

double temporal_stability_variant(std::span<const BinaryMask> masks) {
    if (masks.size() < 2) throw std::invalid_argument("temporal_stability_variant: need at least two masks");
    double sum = 0.0;
    for (std::size_t t = 0; t + 1 < masks.size(); ++t) {
        const BinaryMask& a = masks[t];
        const BinaryMask& b = masks[t + 1];
        if (!a.same_shape(b)) throw std::invalid_argument("temporal_stability_variant: mask dimensions differ");
        std::size_t diff = 0, area = 0;
        for (std::size_t p = 0; p < a.size(); ++p) {
            const bool x = a.data[p] != 0, y = b.data[p] != 0;
            diff += x != y;
            area += std::size_t(x) + std::size_t(y);
        }
        sum += double(diff) / double(std::max<std::size_t>(1, area));
    }
    return sum / double(masks.size() - 1);
}

}  // namespace nrf
