#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>

#include "nrf/metrics.hpp"
#include "support/fixtures.hpp"

using namespace nrf;
namespace t = nrf::testing;

namespace {

BinaryMask rect(int w, int h, int x0, int y0, int rw, int rh) {
    BinaryMask m(w, h, 0);
    for (int y = y0; y < y0 + rh; ++y)
        for (int x = x0; x < x0 + rw; ++x) m.at(x, y) = 1;
    return m;
}

BinaryMask random_mask(int w, int h, t::Rng& rng, unsigned density) {
    BinaryMask m(w, h, 0);
    for (auto& v : m.data) v = (rng() % 100) < density;
    return m;
}

VideoFrames video(std::string id, std::vector<double> ious) {
    VideoFrames v{std::move(id), {}, std::nullopt};
    for (double i : ious) v.frames.push_back({i, i, i});
    return v;
}

}  // namespace

TEST_CASE("frame_eval") {
    const BinaryMask sq = rect(10, 10, 2, 2, 4, 4);
    const FrameScore same = frame_eval(sq, sq);
    CHECK(same.precision == 1.0);
    CHECK(same.recall == 1.0);
    CHECK(same.iou == 1.0);

    const FrameScore disjoint = frame_eval(sq, rect(10, 10, 7, 7, 2, 2));
    CHECK(disjoint.precision == 0.0);
    CHECK(disjoint.recall == 0.0);
    CHECK(disjoint.iou == 0.0);

    const FrameScore left = frame_eval(rect(10, 10, 0, 0, 5, 10), BinaryMask(10, 10, 1));
    CHECK(left.precision == 1.0);
    CHECK(left.recall == 0.5);
    CHECK(left.iou == 0.5);

    const BinaryMask none(10, 10, 0);
    const FrameScore both_empty = frame_eval(none, none);
    CHECK(both_empty.precision == 1.0);
    CHECK(both_empty.recall == 1.0);
    CHECK(both_empty.iou == 1.0);
    const FrameScore miss = frame_eval(none, sq);
    CHECK(miss.precision == 0.0);
    CHECK(miss.recall == 0.0);
    const FrameScore spurious = frame_eval(sq, none);
    CHECK(spurious.recall == 1.0);
    CHECK(spurious.precision == 0.0);
    CHECK(spurious.iou == 0.0);

    CHECK_THROWS_AS(frame_eval(sq, BinaryMask(9, 10)), std::invalid_argument);
}

TEST_CASE("frame_eval bounds: IoU never exceeds precision or recall") {
    t::Rng rng(81);
    for (int trial = 0; trial < 200; ++trial) {
        const BinaryMask a = random_mask(12, 9, rng, unsigned(rng() % 60));
        const BinaryMask b = random_mask(12, 9, rng, unsigned(rng() % 60));
        const FrameScore s = frame_eval(a, b);
        for (double v : {s.precision, s.recall, s.iou}) CHECK((v >= 0.0 && v <= 1.0));
        CHECK(s.iou <= s.precision);
        CHECK(s.iou <= s.recall);
    }
}

TEST_CASE("dataset_eval balances videos") {
    const std::vector<VideoFrames> one{video("a", {0.5, 0.7})};
    const DatasetEval e1 = dataset_eval(one);
    CHECK(e1.mIoU == doctest::Approx(0.6));
    CHECK(e1.per_video.size() == 1);
    CHECK(e1.per_video[0].iou == doctest::Approx(0.6));
    CHECK_FALSE(e1.mT.has_value());

    const std::vector<VideoFrames> two{video("long", std::vector<double>(100, 0.2)), video("short", {0.8})};
    CHECK(dataset_eval(two).mIoU == doctest::Approx(0.5));

    // Flat per-frame averaging agrees only when lengths match.
    auto flat = [](const std::vector<VideoFrames>& vs) {
        double s = 0;
        int n = 0;
        for (const auto& v : vs)
            for (const auto& f : v.frames) s += f.iou, ++n;
        return s / n;
    };
    const std::vector<VideoFrames> equal{video("a", {0.1, 0.3}), video("b", {0.9, 0.5}), video("c", {0.4, 0.4})};
    CHECK(dataset_eval(equal).mIoU == doctest::Approx(flat(equal)));
    const std::vector<VideoFrames> unequal{video("a", {0.1}), video("b", {0.9, 0.5, 0.7}), video("c", {0.4, 0.4})};
    CHECK(dataset_eval(unequal).mIoU == doctest::Approx(0.4));
    CHECK(flat(unequal) == doctest::Approx(0.5));
    CHECK(dataset_eval(unequal).mIoU != doctest::Approx(flat(unequal)));

    CHECK_THROWS_AS(dataset_eval(std::vector<VideoFrames>{}), std::invalid_argument);
    CHECK_THROWS_AS(dataset_eval(std::vector<VideoFrames>{video("x", {})}), std::invalid_argument);
}

TEST_CASE("dataset_eval is invariant to video order and carries stability") {
    std::vector<VideoFrames> vs{video("a", {0.1, 0.2}), video("b", {0.6}), video("c", {0.3, 0.9, 0.8})};
    vs[0].stability = 0.25;
    vs[2].stability = 0.75;
    const DatasetEval fwd = dataset_eval(vs);
    std::reverse(vs.begin(), vs.end());
    const DatasetEval rev = dataset_eval(vs);
    CHECK(fwd.mIoU == doctest::Approx(rev.mIoU).epsilon(1e-15));
    CHECK(fwd.mAP == doctest::Approx(rev.mAP).epsilon(1e-15));
    REQUIRE(fwd.mT.has_value());
    CHECK(*fwd.mT == doctest::Approx(0.5));
    CHECK(fwd.f_beta == doctest::Approx(f_beta(fwd.mAP, fwd.mAR)));
}

TEST_CASE("f_beta") {
    CHECK(std::fabs(f_beta(0.805, 0.910, 0.3) - 0.827) <= 0.0005);
    CHECK(std::fabs(f_beta(0.789, 0.870, 0.3) - 0.806) <= 0.0005);
    CHECK(f_beta(0.805, 0.910) == doctest::Approx(0.8270212765957449).epsilon(1e-14));
    CHECK(f_beta(0.789, 0.870) == doctest::Approx(0.8063242071021958).epsilon(1e-14));
    CHECK(f_beta(0.42, 0.42) == doctest::Approx(0.42));
    CHECK(f_beta(0.0, 0.0) == 0.0);
    t::Rng rng(82);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double p = unit(rng), r = unit(rng);
        const double f = f_beta(p, r);
        CHECK(f >= std::min(p, r) - 1e-12);
        CHECK(f <= std::max(p, r) + 1e-12);
    }
}

TEST_CASE("temporal_stability_variant") {
    const BinaryMask sq = rect(20, 20, 3, 3, 5, 5);
    CHECK(temporal_stability_variant(std::vector<BinaryMask>{sq, sq, sq}) == 0.0);
    const BinaryMask other = rect(20, 20, 12, 12, 5, 5);
    CHECK(temporal_stability_variant(std::vector<BinaryMask>{sq, other, sq, other}) == 1.0);
    const BinaryMask none(20, 20, 0);
    CHECK(temporal_stability_variant(std::vector<BinaryMask>{none, none}) == 0.0);
    CHECK_THROWS_AS(temporal_stability_variant(std::vector<BinaryMask>{sq}), std::invalid_argument);
    CHECK_THROWS_AS(temporal_stability_variant(std::vector<BinaryMask>{sq, BinaryMask(10, 20)}), std::invalid_argument);
}

TEST_CASE("temporal_stability_variant on a translating square matches set arithmetic") {
    std::vector<BinaryMask> masks;
    std::vector<std::set<std::pair<int, int>>> sets;
    for (int t = 0; t < 10; ++t) {
        masks.push_back(rect(100, 100, 10 + t, 30, 20, 20));
        std::set<std::pair<int, int>> s;
        for (int y = 30; y < 50; ++y)
            for (int x = 10 + t; x < 30 + t; ++x) s.emplace(x, y);
        sets.push_back(std::move(s));
    }
    double ref = 0.0;
    for (std::size_t t = 0; t + 1 < sets.size(); ++t) {
        std::vector<std::pair<int, int>> xr;
        std::set_symmetric_difference(sets[t].begin(), sets[t].end(), sets[t + 1].begin(), sets[t + 1].end(),
                                      std::back_inserter(xr));
        ref += double(xr.size()) / double(sets[t].size() + sets[t + 1].size());
    }
    ref /= double(sets.size() - 1);
    CHECK(temporal_stability_variant(masks) == doctest::Approx(ref).epsilon(1e-15));
    CHECK(ref == doctest::Approx(0.05));
}

TEST_CASE("temporal_stability_variant is invariant to reversal") {
    t::Rng rng(83);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<BinaryMask> masks;
        for (int k = 0; k < 6; ++k) masks.push_back(random_mask(8, 8, rng, 40));
        const double fwd = temporal_stability_variant(masks);
        std::reverse(masks.begin(), masks.end());
        CHECK(temporal_stability_variant(masks) == doctest::Approx(fwd).epsilon(1e-15));
        CHECK(fwd >= 0.0);
        CHECK(fwd <= 1.0);
    }
}
