#pragma once

#include "nrf/imaging.hpp"

namespace nrf {

// Weights of the complementary terms and their penalty exponents.
struct ComplementaryWeights {
    double lambda_cap = 0.4;
    double lambda_cup = 0.4;
    double sigma_cap = 2.0;
    double sigma_cup = 2.0;

    void validate() const;
};

struct LossReport {
    double empirical = 0.0;
    double intersection = 0.0;
    double union_ = 0.0;
    double total = 0.0;
    Field grad_f;
    Field grad_b;
};

inline constexpr double kProbabilityClamp = 1e-7;

// Mean binary cross-entropy of prediction P against target T, with P clamped
// to [eps, 1 - eps].
double cross_entropy(const ScalarMap& prediction, const ScalarMap& target);
// Mean of (F*B)^sigma.
double intersection_loss(const ScalarMap& fg, const ScalarMap& bg, double sigma_cap);
// Mean of |F + B - 1|^sigma.
double union_loss(const ScalarMap& fg, const ScalarMap& bg, double sigma_cup);

// E(F,G) + E(B,1-G) + lambda_cap * intersection + lambda_cup * union, with
// analytic gradients with respect to F and B.
LossReport total_objective(const ScalarMap& fg, const ScalarMap& bg, const ScalarMap& gt,
                           const ComplementaryWeights& weights = {});

}  // namespace nrf
