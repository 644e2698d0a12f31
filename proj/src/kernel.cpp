#include "bmx/kernel.hpp"

#include <cmath>

#include "bmx/errors.hpp"

namespace bmx {

CorrelationKernel::CorrelationKernel(double t_c, double lambda) : t_c_(t_c), lambda_(lambda) {
    if (!(t_c > 0.0)) {
        throw scenario_error("correlation time must be positive");
    }
    if (lambda != 0.0 && !(lambda > 1.0)) {
        throw scenario_error("kernel exponent must be 0 (normal) or greater than 1 (anomalous)");
    }
}

double CorrelationKernel::alpha_intensity(double alpha) const {
    if (alpha < 0.0) {
        throw scenario_error("kernel intensity requires a non-negative time");
    }
    // The power-law term is multiplied by lambda, but pow(0, lambda - 1)
    // would be infinite for lambda = 0, so the term is skipped outright.
    double power = 0.0;
    if (lambda_ != 0.0) {
        power = lambda_ * std::pow(alpha, lambda_ - 1.0);
    }
    return power - std::expm1(-alpha);
}

double CorrelationKernel::intensity(double t) const { return alpha_intensity(t / t_c_); }

double CorrelationKernel::intensity_integral(double t) const {
    if (t < 0.0) {
        throw scenario_error("kernel intensity integral requires a non-negative time");
    }
    double power = 0.0;
    if (lambda_ != 0.0) {
        power = std::pow(t, lambda_) / std::pow(t_c_, lambda_ - 1.0);
    }
    // t + t_c*(e^(-t/t_c) - 1) via expm1 keeps the O(t^2/t_c) small-time
    // behaviour instead of cancelling to zero.
    return power + t + t_c_ * std::expm1(-t / t_c_);
}

}  // namespace bmx
