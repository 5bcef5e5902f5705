#include "nrf/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "nrf/error.hpp"
#include "nrf/kernels.hpp"
#include "nrf/metrics.hpp"

namespace nrf::cli {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::shared_ptr<spdlog::logger> logger() {
    static std::shared_ptr<spdlog::logger> log = [] {
        auto l = spdlog::stderr_color_mt("nrf-prop");
        l->set_level(spdlog::level::warn);
        if (const char* level = std::getenv("NRF_PROP_LOG")) l->set_level(spdlog::level::from_str(level));
        return l;
    }();
    return log;
}

bool is_image(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp" || ext == ".tif" || ext == ".tiff";
}

json lambda_json(double lambda) { return std::isinf(lambda) ? json("inf") : json(lambda); }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) throw InputError("cannot create directory " + dir.string());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

void save_field_csv(const Field& field, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    for (int y = 0; y < field.height; ++y) {
        for (int x = 0; x < field.width; ++x) out << (x ? "," : "") << fmt::format("{:.17g}", field.at(x, y));
        out << '\n';
    }
}

json config_echo(const RunConfig& c) {
    const auto& p = c.propagation;
    json j;
    j["input"] = c.input_root.string();
    j["output"] = c.output_dir.string();
    j["k0"] = p.k0;
    j["lambda_c"] = lambda_json(p.lambda_c);
    j["dk"] = p.dk;
    j["superpixels"] = p.slic.target_count;
    j["compactness"] = p.slic.compactness;
    j["slic_iters"] = p.slic.max_iters;
    j["threshold"] = p.threshold_ratio;
    j["closing_radius"] = p.closing_radius;
    j["spaces"] = p.spaces.to_string();
    j["flow_mode"] = std::string(to_string(p.flow_mode));
    j["debug_dir"] = c.debug_dir ? json(c.debug_dir->string()) : json(nullptr);
    j["workers"] = c.workers;
    return j;
}

json timing_json(const StageTimings& t) {
    return json{{"superpixel_s", t.superpixel_s},
                {"features_s", t.features_s},
                {"flow_s", t.flow_s},
                {"propagation_s", t.propagation_s},
                {"total_s", t.total()}};
}

void write_debug(const fs::path& dir, const std::vector<std::string>& stems, const std::vector<RgbFrame>& frames,
                 const VideoResult& result) {
    ensure_directory(dir);
    for (std::size_t u = 0; u < stems.size(); ++u) {
        const FrameState& s = result.frames[u];
        const std::string& stem = stems[u];
        save_label_map(s.grid, dir / (stem + "_labels.png"));
        save_frame(boundary_overlay(frames[u], s.grid), dir / (stem + "_boundaries.png"));
        save_descriptors_csv(s.features, dir / (stem + "_features.csv"));
        save_scalar_map(s.importance, dir / (stem + "_importance.png"));
        std::string scores = "superpixel fg_init bg_init fg_refined bg_refined\n";
        for (int i = 0; i < s.grid.count; ++i) {
            const auto k = std::size_t(i);
            scores += fmt::format("{} {:.17g} {:.17g} {:.17g} {:.17g}\n", i, s.fg_init[k], s.bg_init[k],
                                  s.fg_refined[k], s.bg_refined[k]);
        }
        write_text(dir / (stem + "_scores.txt"), scores);
        for (const auto& [v, flow] : s.flows)
            save_flow_text(flow, dir / (stem + "_flow_" + stems[std::size_t(v)] + ".txt"));
    }
}

}  // namespace

std::map<std::string, fs::path> list_images(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw InputError("missing directory: " + dir.string());
    std::map<std::string, fs::path> images;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || !is_image(entry.path())) continue;
        const std::string stem = entry.path().stem().string();
        if (!images.emplace(stem, entry.path()).second)
            throw InputError(fmt::format("two images share the stem '{}' in {}", stem, dir.string()));
    }
    return images;
}

double parse_lambda(const std::string& text) {
    if (text == "inf" || text == "+inf" || text == "infinity") return kInfiniteCoupling;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !(v >= 0.0) || std::isinf(v))
        throw std::invalid_argument("lambda-c must be a non-negative number or 'inf', got '" + text + "'");
    return v;
}

void cmd_run(const RunConfig& config, std::ostream& out) {
    config.propagation.validate();
    if (config.workers < 1) throw std::invalid_argument("workers must be >= 1");

    const auto frame_files = list_images(config.input_root / "frames");
    if (frame_files.empty()) throw InputError("no frames in " + (config.input_root / "frames").string());
    const auto fg_files = list_images(config.input_root / "fg");
    const auto bg_files = list_images(config.input_root / "bg");

    std::vector<std::string> stems;
    for (const auto& [stem, path] : frame_files) {
        if (!fg_files.contains(stem)) throw InputError(fmt::format("missing foreground map for stem '{}'", stem));
        if (!bg_files.contains(stem)) throw InputError(fmt::format("missing background map for stem '{}'", stem));
        stems.push_back(stem);
    }

    std::vector<RgbFrame> frames;
    std::vector<ScalarMap> fg, bg;
    for (const auto& stem : stems) {
        frames.push_back(load_frame(frame_files.at(stem)));
        fg.push_back(load_scalar_map(fg_files.at(stem)));
        bg.push_back(load_scalar_map(bg_files.at(stem)));
    }
    logger()->info("loaded {} frames from {}", stems.size(), config.input_root.string());

    const VideoResult result = run_video(frames, fg, bg, config.propagation, {config.workers, true});

    ensure_directory(config.output_dir);
    json manifest;
    manifest["config"] = config_echo(config);
    manifest["isa"] = std::string(kernels::isa_name(kernels::active().isa));
    json per_frame = json::array();
    StageTimings mean;
    for (std::size_t u = 0; u < stems.size(); ++u) {
        save_mask(result.masks[u], config.output_dir / (stems[u] + ".png"));
        const FrameState& s = result.frames[u];
        json refs = json::array();
        std::size_t zero_rows = 0;
        for (const auto& [v, flow] : s.flows) {
            refs.push_back(stems[std::size_t(v)]);
            zero_rows += flow.zero_row_count();
        }
        per_frame.push_back(json{{"stem", stems[u]},
                                 {"superpixels", s.grid.count},
                                 {"refs", refs},
                                 {"zero_flow_rows", zero_rows},
                                 {"mask_pixels", count_ones(result.masks[u])},
                                 {"timing", timing_json(result.timings[u])}});
        const auto& t = result.timings[u];
        mean.superpixel_s += t.superpixel_s / double(stems.size());
        mean.features_s += t.features_s / double(stems.size());
        mean.flow_s += t.flow_s / double(stems.size());
        mean.propagation_s += t.propagation_s / double(stems.size());
        logger()->debug("frame {}: {} superpixels, {:.3f}s", stems[u], s.grid.count, t.total());
    }
    manifest["frames"] = per_frame;
    manifest["timing"] = timing_json(mean);
    write_text(config.output_dir / "manifest.json", manifest.dump(2) + "\n");

    if (config.debug_dir) write_debug(*config.debug_dir, stems, frames, result);
    out << fmt::format("wrote {} masks to {} ({:.3f} s/frame)\n", stems.size(), config.output_dir.string(),
                       mean.total());
}

void cmd_eval(const EvalConfig& config, std::ostream& out) {
    const auto gt_files = list_images(config.gt_dir);
    if (gt_files.empty()) throw InputError("no ground-truth images in " + config.gt_dir.string());
    const auto mask_files = list_images(config.masks_dir);

    std::map<std::string, std::string> video_of;
    if (config.grouping) {
        std::ifstream in(*config.grouping);
        if (!in) throw InputError("missing grouping manifest: " + config.grouping->string());
        json groups;
        try {
            groups = json::parse(in);
        } catch (const json::exception& e) {
            throw InputError("cannot parse grouping manifest: " + std::string(e.what()));
        }
        if (!groups.is_object()) throw InputError("grouping manifest must map stems to video ids");
        for (const auto& [stem, id] : groups.items()) {
            if (!id.is_string()) throw InputError("video id for stem '" + stem + "' must be a string");
            video_of[stem] = id.get<std::string>();
        }
    }

    // Video id -> masks/gts in stem order; only annotated stems are scored.
    std::map<std::string, std::vector<std::pair<BinaryMask, BinaryMask>>> videos;
    for (const auto& [stem, gt_path] : gt_files) {
        const auto it = mask_files.find(stem);
        if (it == mask_files.end()) continue;
        std::string id = "video";
        if (config.grouping) {
            const auto g = video_of.find(stem);
            if (g == video_of.end()) throw InputError(fmt::format("stem '{}' is not in the grouping manifest", stem));
            id = g->second;
        }
        BinaryMask mask = load_mask(it->second);
        BinaryMask gt = load_mask(gt_path);
        if (!mask.same_shape(gt)) throw InputError(fmt::format("mask and ground truth sizes differ for '{}'", stem));
        videos[id].emplace_back(std::move(mask), std::move(gt));
    }
    if (videos.empty()) throw InputError("masks and ground truth share no stems");

    std::vector<VideoFrames> evals;
    for (const auto& [id, pairs] : videos) {
        VideoFrames v{id, {}, std::nullopt};
        std::vector<BinaryMask> masks;
        for (const auto& [mask, gt] : pairs) {
            v.frames.push_back(frame_eval(mask, gt));
            masks.push_back(mask);
        }
        if (masks.size() >= 2) v.stability = temporal_stability_variant(masks);
        evals.push_back(std::move(v));
    }
    const DatasetEval d = dataset_eval(evals);

    json report;
    json per_video = json::array();
    for (const auto& v : d.per_video) {
        per_video.push_back(json{{"id", v.id},
                                 {"precision", v.precision},
                                 {"recall", v.recall},
                                 {"iou", v.iou},
                                 {"stability", optional_json(v.stability)}});
    }
    report["per_video"] = per_video;
    report["dataset"] = json{{"mAP", d.mAP}, {"mAR", d.mAR}, {"f_beta", d.f_beta}, {"mIoU", d.mIoU},
                             {"mT", optional_json(d.mT)}};
    if (config.output) {
        write_text(*config.output, report.dump(2) + "\n");
    } else {
        out << report.dump() << "\n";
    }
}

void cmd_loss(const LossConfig& config, std::ostream& out) {
    config.weights.validate();
    const ScalarMap fg = load_scalar_map(config.fg);
    const ScalarMap bg = load_scalar_map(config.bg);
    const ScalarMap gt = load_scalar_map(config.gt);
    if (!fg.same_shape(bg) || !fg.same_shape(gt))
        throw InputError(fmt::format("map sizes differ: F {}x{}, B {}x{}, G {}x{}", fg.width, fg.height, bg.width,
                                     bg.height, gt.width, gt.height));
    const LossReport report = total_objective(fg, bg, gt, config.weights);
    if (config.debug_dir) {
        ensure_directory(*config.debug_dir);
        save_field_csv(report.grad_f, *config.debug_dir / "grad_f.csv");
        save_field_csv(report.grad_b, *config.debug_dir / "grad_b.csv");
    }
    const json j{{"empirical", report.empirical},
                 {"intersection", report.intersection},
                 {"union", report.union_},
                 {"total", report.total}};
    out << j.dump() << "\n";
}

RgbFrame draw_contour(const RgbFrame& frame, const BinaryMask& mask) {
    if (!mask.same_shape(frame.width, frame.height)) throw InputError("mask and frame sizes differ");
    RgbFrame out = frame;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            const bool edge = x == 0 || y == 0 || x + 1 == mask.width || y + 1 == mask.height || !mask.at(x - 1, y) ||
                              !mask.at(x + 1, y) || !mask.at(x, y - 1) || !mask.at(x, y + 1);
            if (edge) out.set(x, y, {0.0, 1.0, 0.0});
        }
    }
    return out;
}

void cmd_overlay(const OverlayConfig& config, std::ostream& out) {
    const auto frame_files = list_images(config.frames_dir);
    const auto mask_files = list_images(config.masks_dir);
    for (const auto& [stem, path] : frame_files)
        if (!mask_files.contains(stem)) throw InputError(fmt::format("missing mask for stem '{}'", stem));
    for (const auto& [stem, path] : mask_files)
        if (!frame_files.contains(stem)) throw InputError(fmt::format("missing frame for stem '{}'", stem));
    ensure_directory(config.output_dir);
    for (const auto& [stem, path] : frame_files) {
        const RgbFrame frame = load_frame(path);
        const BinaryMask mask = load_mask(mask_files.at(stem));
        save_frame(draw_contour(frame, mask), config.output_dir / (stem + ".png"));
    }
    out << fmt::format("wrote {} overlays to {}\n", frame_files.size(), config.output_dir.string());
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Temporal refinement of foreground/background maps with neighborhood reversible flow",
                 "nrf-prop"};
    app.require_subcommand(1);

    RunConfig run;
    std::string lambda_text = "0.5", spaces_text = "rgb,lab,hsv", mode_text = "reversible";
    std::string debug_dir;
    auto* run_cmd = app.add_subcommand("run", "Refine maps of one video into masks");
    run_cmd->add_option("--input", run.input_root, "Directory holding frames/, fg/ and bg/")->required();
    run_cmd->add_option("--output", run.output_dir, "Directory for masks and manifest.json")->required();
    run_cmd->add_option("--k0", run.propagation.k0, "Reversibility window")->capture_default_str();
    run_cmd->add_option("--lambda-c", lambda_text, "Temporal coupling (number or inf)")->capture_default_str();
    run_cmd->add_option("--dk", run.propagation.dk, "Keyframe interval")->capture_default_str();
    run_cmd->add_option("--superpixels", run.propagation.slic.target_count, "SLIC target count")
        ->capture_default_str();
    run_cmd->add_option("--compactness", run.propagation.slic.compactness, "SLIC compactness")->capture_default_str();
    run_cmd->add_option("--slic-iters", run.propagation.slic.max_iters, "SLIC iterations")->capture_default_str();
    run_cmd->add_option("--threshold", run.propagation.threshold_ratio, "Fraction of the peak importance")
        ->capture_default_str();
    run_cmd->add_option("--closing-radius", run.propagation.closing_radius, "Disk radius, 0 disables")
        ->capture_default_str();
    run_cmd->add_option("--spaces", spaces_text, "Descriptor color spaces")->capture_default_str();
    run_cmd->add_option("--flow-mode", mode_text, "reversible or cosine")->capture_default_str();
    run_cmd->add_option("--debug-dir", debug_dir, "Write intermediate artifacts here");
    run_cmd->add_option("--workers", run.workers, "Frame-level worker threads")->capture_default_str();

    EvalConfig eval;
    std::string groups, eval_out;
    auto* eval_cmd = app.add_subcommand("eval", "Score masks against ground truth");
    eval_cmd->add_option("--masks", eval.masks_dir, "Predicted masks")->required();
    eval_cmd->add_option("--gt", eval.gt_dir, "Ground-truth masks (may be sparse)")->required();
    eval_cmd->add_option("--groups", groups, "JSON object mapping stems to video ids");
    eval_cmd->add_option("--output", eval_out, "Write the report here instead of stdout");

    LossConfig loss;
    std::string loss_debug;
    auto* loss_cmd = app.add_subcommand("loss", "Evaluate the complementary objective for one map triple");
    loss_cmd->add_option("--fg", loss.fg, "Foreground map F")->required();
    loss_cmd->add_option("--bg", loss.bg, "Background map B")->required();
    loss_cmd->add_option("--gt", loss.gt, "Ground truth G")->required();
    loss_cmd->add_option("--lambda-cap", loss.weights.lambda_cap)->capture_default_str();
    loss_cmd->add_option("--lambda-cup", loss.weights.lambda_cup)->capture_default_str();
    loss_cmd->add_option("--sigma-cap", loss.weights.sigma_cap)->capture_default_str();
    loss_cmd->add_option("--sigma-cup", loss.weights.sigma_cup)->capture_default_str();
    loss_cmd->add_option("--debug-dir", loss_debug, "Write gradient fields as CSV here");

    OverlayConfig overlay;
    auto* overlay_cmd = app.add_subcommand("overlay", "Draw mask contours over frames");
    overlay_cmd->add_option("--frames", overlay.frames_dir)->required();
    overlay_cmd->add_option("--masks", overlay.masks_dir)->required();
    overlay_cmd->add_option("--output", overlay.output_dir)->required();

    std::vector<std::string> argv_store{"nrf-prop"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*run_cmd) {
            run.propagation.lambda_c = parse_lambda(lambda_text);
            run.propagation.spaces = ColorSpaces::parse(spaces_text);
            run.propagation.flow_mode = parse_flow_mode(mode_text);
            if (!debug_dir.empty()) run.debug_dir = debug_dir;
            cmd_run(run, out);
        } else if (*eval_cmd) {
            if (!groups.empty()) eval.grouping = groups;
            if (!eval_out.empty()) eval.output = eval_out;
            cmd_eval(eval, out);
        } else if (*loss_cmd) {
            if (!loss_debug.empty()) loss.debug_dir = loss_debug;
            cmd_loss(loss, out);
        } else if (*overlay_cmd) {
            cmd_overlay(overlay, out);
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kOk;
}

}  // namespace nrf::cli
