#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nrf/objective.hpp"
#include "nrf/pipeline.hpp"

namespace nrf::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kInternalError = 2 };

struct RunConfig {
    std::filesystem::path input_root;  // frames/, fg/, bg/
    std::filesystem::path output_dir;
    PropagationConfig propagation{};
    std::optional<std::filesystem::path> debug_dir;
    int workers = 1;
};

struct EvalConfig {
    std::filesystem::path masks_dir;
    std::filesystem::path gt_dir;
    std::optional<std::filesystem::path> grouping;  // JSON object: stem -> video id
    std::optional<std::filesystem::path> output;    // stdout when absent
};

struct LossConfig {
    std::filesystem::path fg, bg, gt;
    ComplementaryWeights weights{};
    std::optional<std::filesystem::path> debug_dir;
};

struct OverlayConfig {
    std::filesystem::path frames_dir, masks_dir, output_dir;
};

// Image files of a directory keyed by stem, in stem order. Throws InputError
// for a missing directory or two files sharing a stem.
std::map<std::string, std::filesystem::path> list_images(const std::filesystem::path& dir);

// Accepts a non-negative number or "inf".
double parse_lambda(const std::string& text);

// The subcommands throw InputError / std::invalid_argument for bad inputs.
void cmd_run(const RunConfig& config, std::ostream& out);
void cmd_eval(const EvalConfig& config, std::ostream& out);
void cmd_loss(const LossConfig& config, std::ostream& out);
void cmd_overlay(const OverlayConfig& config, std::ostream& out);

// Green 4-connected contour of `mask` drawn over `frame`.
RgbFrame draw_contour(const RgbFrame& frame, const BinaryMask& mask);

// Parses `args` (without the program name), dispatches and maps errors to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nrf::cli
