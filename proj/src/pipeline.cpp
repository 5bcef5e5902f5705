#include "nrf/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "nrf/parallel.hpp"

namespace nrf {

namespace {

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

void PropagationConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
    if (!(lambda_c >= 0.0)) fail("lambda_c must be non-negative or inf");
    if (k0 < 1) fail("k0 must be >= 1");
    if (dk < 1) fail("dk must be >= 1");
    if (!(threshold_ratio > 0.0 && threshold_ratio <= 1.0)) fail("threshold ratio must lie in (0, 1]");
    if (closing_radius < 0) fail("closing radius must be >= 0");
    if (slic.target_count < 2) fail("superpixel count must be >= 2");
    if (!(slic.compactness > 0.0)) fail("compactness must be positive");
    if (slic.max_iters < 1) fail("SLIC iterations must be >= 1");
    if (spaces.empty()) fail("at least one color space is required");
}

VideoResult run_video(const std::vector<RgbFrame>& frames, const std::vector<ScalarMap>& fg_maps,
                      const std::vector<ScalarMap>& bg_maps, const PropagationConfig& config,
                      const RunOptions& options) {
    config.validate();
    if (frames.size() != fg_maps.size() || frames.size() != bg_maps.size())
        throw std::invalid_argument(fmt::format("run_video: {} frames but {} fg and {} bg maps", frames.size(),
                                                fg_maps.size(), bg_maps.size()));

    const std::size_t count = frames.size();
    VideoResult result;
    result.masks.resize(count);
    result.timings.resize(count);
    result.frames.resize(count);

    parallel_for(count, options.workers, [&](std::size_t u) {
        Stopwatch watch;
        FrameState& state = result.frames[u];
        const RgbFrame& frame = frames[u];
        state.grid = slic(frame, config.slic);
        result.timings[u].superpixel_s = watch.lap();

        state.features = describe(frame, state.grid, config.spaces);
        state.fg_init = init_scores(resize_bilinear(fg_maps[u], frame.width, frame.height), state.grid);
        state.bg_init = init_scores(resize_bilinear(bg_maps[u], frame.width, frame.height), state.grid);
        result.timings[u].features_s = watch.lap();
    });

    parallel_for(count, options.workers, [&](std::size_t u) {
        Stopwatch watch;
        FrameState& state = result.frames[u];
        state.refs = keyframe_set(int(u), config.dk, int(count)).refs;

        std::vector<FlowMatrix> flows;
        flows.reserve(state.refs.size());
        for (const int v : state.refs)
            flows.push_back(build_flow(state.features, result.frames[std::size_t(v)].features, config.k0,
                                       config.flow_mode));
        result.timings[u].flow_s = watch.lap();

        for (std::size_t r = 0; r < state.refs.size(); ++r) {
            const FrameState& ref = result.frames[std::size_t(state.refs[r])];
            state.fg_propagated.push_back(propagate(flows[r], ref.fg_init));
            state.bg_propagated.push_back(propagate(flows[r], ref.bg_init));
        }
        state.fg_refined = refine(state.fg_init, state.fg_propagated, config.lambda_c);
        state.bg_refined = refine(state.bg_init, state.bg_propagated, config.lambda_c);
        state.importance = importance_map(state.grid, state.fg_refined, state.bg_refined);
        BinaryMask mask = binarize(state.importance, config.threshold_ratio);
        result.masks[u] = config.closing_radius > 0 ? morphological_close(mask, config.closing_radius) : std::move(mask);
        result.timings[u].propagation_s = watch.lap();

        if (options.keep_flows)
            for (std::size_t r = 0; r < flows.size(); ++r) state.flows.emplace_back(state.refs[r], std::move(flows[r]));
    });
    return result;
}

}  // namespace nrf
