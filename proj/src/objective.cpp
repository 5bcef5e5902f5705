#include "nrf/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nrf {

namespace {

void require_same_shape(const ScalarMap& a, const ScalarMap& b, const char* what) {
    if (!a.same_shape(b)) throw std::invalid_argument(std::string(what) + ": map dimensions differ");
    if (a.empty()) throw std::invalid_argument(std::string(what) + ": empty map");
}

void require_unit_range(const ScalarMap& m, const char* what) {
    for (double v : m.data)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(what) + ": values must lie in [0,1]");
}

double clamp_probability(double p) { return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp); }

// d/dp of -(t ln p + (1-t) ln(1-p)) with the clamp; zero where the clamp is active.
double cross_entropy_slope(double p, double t) {
    if (p <= kProbabilityClamp || p >= 1.0 - kProbabilityClamp) return 0.0;
    return -(t / p - (1.0 - t) / (1.0 - p));
}

// d/da of (a*b)^sigma.
double product_power_slope(double a, double b, double sigma) {
    const double base = a * b;
    if (base > 0.0) return sigma * std::pow(base, sigma - 1.0) * b;
    if (b == 0.0 || sigma > 1.0) return 0.0;
    return sigma == 1.0 ? b : std::numeric_limits<double>::infinity();
}

// d/ds of |s|^sigma, taking 0 at s = 0.
double abs_power_slope(double s, double sigma) {
    if (s == 0.0) return 0.0;
    return sigma * std::pow(std::fabs(s), sigma - 1.0) * (s > 0.0 ? 1.0 : -1.0);
}

}  // namespace

void ComplementaryWeights::validate() const {
    if (!(lambda_cap >= 0.0) || !(lambda_cup >= 0.0)) throw std::invalid_argument("complementary weights must be >= 0");
    if (!(sigma_cap > 0.0) || !(sigma_cup > 0.0)) throw std::invalid_argument("penalty exponents must be > 0");
}

double cross_entropy(const ScalarMap& prediction, const ScalarMap& target) {
    require_same_shape(prediction, target, "cross_entropy");
    double sum = 0.0;
    for (std::size_t p = 0; p < prediction.size(); ++p) {
        const double q = clamp_probability(prediction.data[p]);
        const double t = target.data[p];
        sum += t * std::log(q) + (1.0 - t) * std::log(1.0 - q);
    }
    return -sum / double(prediction.size());
}

double intersection_loss(const ScalarMap& fg, const ScalarMap& bg, double sigma_cap) {
    require_same_shape(fg, bg, "intersection_loss");
    require_unit_range(fg, "intersection_loss");
    require_unit_range(bg, "intersection_loss");
    if (!(sigma_cap > 0.0)) throw std::invalid_argument("intersection_loss: exponent must be > 0");
    double sum = 0.0;
    for (std::size_t p = 0; p < fg.size(); ++p) sum += std::pow(fg.data[p] * bg.data[p], sigma_cap);
    return sum / double(fg.size());
}

double union_loss(const ScalarMap& fg, const ScalarMap& bg, double sigma_cup) {
    require_same_shape(fg, bg, "union_loss");
    require_unit_range(fg, "union_loss");
    require_unit_range(bg, "union_loss");
    if (!(sigma_cup > 0.0)) throw std::invalid_argument("union_loss: exponent must be > 0");
    double sum = 0.0;
    for (std::size_t p = 0; p < fg.size(); ++p) sum += std::pow(std::fabs(fg.data[p] + bg.data[p] - 1.0), sigma_cup);
    return sum / double(fg.size());
}

LossReport total_objective(const ScalarMap& fg, const ScalarMap& bg, const ScalarMap& gt,
                           const ComplementaryWeights& weights) {
    weights.validate();
    require_same_shape(fg, gt, "total_objective");
    require_same_shape(bg, gt, "total_objective");

    ScalarMap inverse_gt = gt;
    for (double& v : inverse_gt.data) v = 1.0 - v;

    LossReport report;
    report.empirical = cross_entropy(fg, gt) + cross_entropy(bg, inverse_gt);
    report.intersection = intersection_loss(fg, bg, weights.sigma_cap);
    report.union_ = union_loss(fg, bg, weights.sigma_cup);
    report.total = report.empirical + weights.lambda_cap * report.intersection + weights.lambda_cup * report.union_;

    const double inv_n = 1.0 / double(fg.size());
    report.grad_f = Field(fg.width, fg.height);
    report.grad_b = Field(fg.width, fg.height);
    for (std::size_t p = 0; p < fg.size(); ++p) {
        const double f = fg.data[p], b = bg.data[p], g = gt.data[p];
        const double s = abs_power_slope(f + b - 1.0, weights.sigma_cup);
        report.grad_f.data[p] = inv_n * (cross_entropy_slope(f, g) +
                                         weights.lambda_cap * product_power_slope(f, b, weights.sigma_cap) +
                                         weights.lambda_cup * s);
        report.grad_b.data[p] = inv_n * (cross_entropy_slope(b, 1.0 - g) +
                                         weights.lambda_cap * product_power_slope(b, f, weights.sigma_cap) +
                                         weights.lambda_cup * s);
    }
    return report;
}

}  // namespace nrf
