#include <doctest.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "nrf/cli.hpp"
#include "nrf/error.hpp"
#include "support/fixtures.hpp"
#include "support/temp_dir.hpp"

using namespace nrf;
namespace t = nrf::testing;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    return json::parse(in);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::vector<std::string> kSmall{"--superpixels", "60", "--dk", "2"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

TEST_CASE("list_images and parse_lambda") {
    t::TempDir dir("list");
    save_mask(BinaryMask(2, 2, 1), dir / "b.png");
    save_mask(BinaryMask(2, 2, 1), dir / "a.png");
    std::ofstream(dir / "notes.txt") << "x";
    const auto files = cli::list_images(dir.path());
    REQUIRE(files.size() == 2);
    CHECK(files.begin()->first == "a");
    save_mask(BinaryMask(2, 2, 1), dir / "a.bmp");
    CHECK_THROWS_AS(cli::list_images(dir.path()), InputError);
    CHECK_THROWS_AS(cli::list_images(dir / "missing"), InputError);

    CHECK(cli::parse_lambda("0.25") == 0.25);
    CHECK(std::isinf(cli::parse_lambda("inf")));
    CHECK_THROWS_AS(cli::parse_lambda("-1"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_lambda("abc"), std::invalid_argument);
}

TEST_CASE("run writes one mask per frame and a manifest") {
    t::TempDir dir("run");
    const auto video = t::distractor_video(96, 64, 6);
    t::write_video(video, dir.path());
    const Outcome r = invoke(with({"run", "--input", dir.path().string(), "--output", (dir / "out").string(),
                                "--debug-dir", (dir / "dbg").string()},
                               kSmall));
    REQUIRE_MESSAGE(r.code == 0, r.err);
    for (int i = 0; i < 6; ++i) {
        const BinaryMask m = load_mask(dir / "out" / (t::frame_stem(i) + ".png"));
        CHECK(m.width == 96);
        CHECK(m.height == 64);
    }
    const json manifest = read_json(dir / "out" / "manifest.json");
    CHECK(manifest["frames"].size() == 6);
    CHECK(manifest["config"]["k0"] == 15);
    CHECK(manifest["config"]["lambda_c"] == 0.5);
    CHECK(manifest["frames"][0]["refs"] == json::array({"f002", "f004"}));
    CHECK(manifest["timing"].contains("superpixel_s"));
    CHECK(fs::exists(dir / "dbg" / "f000_labels.png"));
    CHECK(fs::exists(dir / "dbg" / "f000_features.csv"));
    CHECK(fs::exists(dir / "dbg" / "f000_flow_f002.txt"));
}

TEST_CASE("run reports a missing map by stem") {
    t::TempDir dir("missing");
    t::write_video(t::distractor_video(64, 48, 3), dir.path());
    fs::remove(dir / "fg" / "f001.png");
    const Outcome r = invoke({"run", "--input", dir.path().string(), "--output", (dir / "out").string()});
    CHECK(r.code == cli::kInputError);
    CHECK(r.err.find("f001") != std::string::npos);
}

TEST_CASE("run rejects bad flags") {
    t::TempDir dir("flags");
    t::write_video(t::distractor_video(64, 48, 2), dir.path());
    const std::vector<std::string> base{"run", "--input", dir.path().string(), "--output", (dir / "out").string()};
    CHECK(invoke(with(base, {"--k0", "0"})).code == cli::kInputError);
    CHECK(invoke(with(base, {"--lambda-c", "-2"})).code == cli::kInputError);
    CHECK(invoke(with(base, {"--spaces", "rgb,xyz"})).code == cli::kInputError);
    CHECK(invoke(with(base, {"--flow-mode", "magic"})).code == cli::kInputError);
    CHECK(invoke(with(base, {"--threshold", "0"})).code == cli::kInputError);
    CHECK(invoke({"bogus"}).code == cli::kInputError);
    CHECK(invoke({}).code == cli::kInputError);
}

TEST_CASE("lambda 0 through the CLI equals the per-frame baseline") {
    t::TempDir dir("baseline");
    const auto video = t::distractor_video(96, 64, 5);
    t::write_video(video, dir.path());
    REQUIRE(invoke(with({"run", "--input", dir.path().string(), "--output", (dir / "out").string(), "--lambda-c", "0"},
                     kSmall))
                .code == 0);
    PropagationConfig cfg;
    cfg.slic.target_count = 60;
    for (int i = 0; i < 5; ++i) {
        const std::string name = t::frame_stem(i) + ".png";
        const RgbFrame f = load_frame(dir / "frames" / name);
        const SuperpixelGrid g = slic(f, cfg.slic);
        const ScalarMap imp = importance_map(g, init_scores(load_scalar_map(dir / "fg" / name), g),
                                             init_scores(load_scalar_map(dir / "bg" / name), g));
        CHECK(load_mask(dir / "out" / name) == morphological_close(binarize(imp, cfg.threshold_ratio), 3));
    }
}

TEST_CASE("eval") {
    t::TempDir dir("eval");
    const auto video = t::distractor_video(64, 48, 4);
    t::write_video(video, dir.path());

    const Outcome same = invoke({"eval", "--masks", (dir / "gt").string(), "--gt", (dir / "gt").string()});
    REQUIRE_MESSAGE(same.code == 0, same.err);
    const json j = json::parse(same.out);
    CHECK(j["dataset"]["mAP"] == 1.0);
    CHECK(j["dataset"]["mAR"] == 1.0);
    CHECK(j["dataset"]["mIoU"] == 1.0);
    CHECK(j["dataset"]["f_beta"].get<double>() == doctest::Approx(1.0));
    CHECK(j["per_video"][0]["id"] == "video");
    CHECK(j["per_video"][0]["stability"].get<double>() > 0.0);

    fs::create_directories(dir / "empty");
    CHECK(invoke({"eval", "--masks", (dir / "gt").string(), "--gt", (dir / "empty").string()}).code == cli::kInputError);

    // Two videos: f000-f001 perfect, f002-f003 empty masks.
    fs::create_directories(dir / "pred");
    for (int i = 0; i < 4; ++i) {
        const std::string name = t::frame_stem(i) + ".png";
        save_mask(i < 2 ? video.gt[std::size_t(i)] : BinaryMask(64, 48, 0), dir / "pred" / name);
    }
    std::ofstream(dir / "groups.json") << R"({"f000":"a","f001":"a","f002":"b","f003":"b"})";
    const Outcome two = invoke({"eval", "--masks", (dir / "pred").string(), "--gt", (dir / "gt").string(), "--groups",
                             (dir / "groups.json").string(), "--output", (dir / "report.json").string()});
    REQUIRE_MESSAGE(two.code == 0, two.err);
    const json r = read_json(dir / "report.json");
    CHECK(r["per_video"].size() == 2);
    CHECK(r["per_video"][1]["iou"] == 0.0);
    CHECK(r["dataset"]["mIoU"] == 0.5);
    CHECK(r["dataset"]["mAP"] == 0.5);

    std::ofstream(dir / "partial.json") << R"({"f000":"a"})";
    CHECK(invoke({"eval", "--masks", (dir / "pred").string(), "--gt", (dir / "gt").string(), "--groups",
               (dir / "partial.json").string()})
              .code == cli::kInputError);
}

TEST_CASE("eval scores only annotated stems") {
    t::TempDir dir("sparse");
    const auto video = t::distractor_video(64, 48, 4);
    t::write_video(video, dir.path());
    fs::remove(dir / "gt" / "f001.png");
    fs::remove(dir / "gt" / "f003.png");
    const Outcome r = invoke({"eval", "--masks", (dir / "gt").string(), "--gt", (dir / "gt").string()});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["dataset"]["mIoU"] == 1.0);
}

TEST_CASE("loss") {
    t::TempDir dir("loss");
    ScalarMap g(4, 4, 0.0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 4; ++y) g.at(x, y) = 1.0;
    ScalarMap b = g;
    for (double& v : b.data) v = 1.0 - v;
    save_scalar_map(g, dir / "f.png");
    save_scalar_map(b, dir / "b.png");
    save_scalar_map(g, dir / "g.png");
    const Outcome r = invoke({"loss", "--fg", (dir / "f.png").string(), "--bg", (dir / "b.png").string(), "--gt",
                           (dir / "g.png").string(), "--debug-dir", (dir / "dbg").string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const json j = json::parse(r.out);
    CHECK(j["total"].get<double>() < 1e-5);
    CHECK(j["intersection"] == 0.0);
    CHECK(fs::exists(dir / "dbg" / "grad_f.csv"));

    save_scalar_map(ScalarMap(3, 4, 0.5), dir / "small.png");
    CHECK(invoke({"loss", "--fg", (dir / "small.png").string(), "--bg", (dir / "b.png").string(), "--gt",
               (dir / "g.png").string()})
              .code == cli::kInputError);
    CHECK(invoke({"loss", "--fg", (dir / "nope.png").string(), "--bg", (dir / "b.png").string(), "--gt",
               (dir / "g.png").string()})
              .code == cli::kInputError);
}

TEST_CASE("draw_contour") {
    const RgbFrame f = t::uniform_frame(8, 8, {0.2, 0.2, 0.2});
    CHECK(cli::draw_contour(f, BinaryMask(8, 8, 0)).pixels == f.pixels);
    const RgbFrame full = cli::draw_contour(f, BinaryMask(8, 8, 1));
    CHECK(full.rgb(0)[1] == 1.0f);
    CHECK(full.rgb(3 * 8 + 3)[1] == doctest::Approx(0.2));
    BinaryMask sq(8, 8, 0);
    for (int y = 2; y < 6; ++y)
        for (int x = 2; x < 6; ++x) sq.at(x, y) = 1;
    const RgbFrame o = cli::draw_contour(f, sq);
    int green = 0;
    for (std::size_t p = 0; p < 64; ++p) green += o.rgb(p)[1] == 1.0;
    CHECK(green == 12);
    CHECK_THROWS_AS(cli::draw_contour(f, BinaryMask(4, 4)), InputError);
}

TEST_CASE("overlay") {
    t::TempDir dir("overlay");
    t::write_video(t::distractor_video(64, 48, 2), dir.path());
    const Outcome r = invoke({"overlay", "--frames", (dir / "frames").string(), "--masks", (dir / "gt").string(),
                           "--output", (dir / "ov").string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(fs::exists(dir / "ov" / "f001.png"));
    fs::remove(dir / "gt" / "f001.png");
    CHECK(invoke({"overlay", "--frames", (dir / "frames").string(), "--masks", (dir / "gt").string(), "--output",
               (dir / "ov").string()})
              .code == cli::kInputError);
}
