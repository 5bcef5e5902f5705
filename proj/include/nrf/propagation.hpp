#pragma once

#include <span>
#include <vector>

#include "nrf/flow.hpp"
#include "nrf/imaging.hpp"
#include "nrf/superpixel.hpp"

namespace nrf {

// Per-superpixel foregroundness or backgroundness.
using ScoreVector = std::vector<double>;

// Mean of `map` over each superpixel.
ScoreVector init_scores(const ScalarMap& map, const SuperpixelGrid& grid);

// flow * scores; empty rows yield 0.
ScoreVector propagate(const FlowMatrix& flow, std::span<const double> scores);

// Minimizer of |x - own|^2 + lambda_c * sum_v |x - propagated_v|^2:
//   (own + lambda_c * sum_v propagated_v) / (1 + lambda_c * |T|).
// lambda_c = +inf gives the mean of the propagated vectors; with nothing
// propagated the result is `own`.
ScoreVector refine(std::span<const double> own, std::span<const ScoreVector> propagated, double lambda_c);

// M(p) = fg[i] * (1 - bg[i]) for the superpixel i containing p.
ScalarMap importance_map(const SuperpixelGrid& grid, std::span<const double> fg, std::span<const double> bg);

// 1 where value >= ratio * max(map); an all-zero map gives an empty mask.
BinaryMask binarize(const ScalarMap& map, double ratio);

}  // namespace nrf
