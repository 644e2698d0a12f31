#pragma once

#include <cmath>

namespace bmx::detail {

// Stable evaluation of the exponential-difference ratio
//
//     expdiff(p, q, t) = (e^(-p t) - e^(-q t)) / (q - p),
//
// symmetric in (p, q), which appears in every relaxation formula of this
// library.  The naive quotient loses all precision as q -> p, and physically
// meaningful parameter choices (damping in resonance with the correlation
// time) land exactly on the degeneracy.  Writing delta = q - p,
//
//     expdiff = e^(-p t) * (-expm1(-delta t)) / delta,
//
// which is stable for any |delta*t| >= 1e-6; below that threshold the Taylor
// expansion in delta,
//
//     e^(-p t) * t * (1 - (delta t)/2 + (delta t)^2/6),
//
// carries relative error below 1e-25 (the next term is (delta t)^3/24).
inline double expdiff(double p, double q, double t) {
    const double delta = q - p;
    const double dt = delta * t;
    if (std::fabs(dt) < 1e-6) {
        return std::exp(-p * t) * t * (1.0 - dt / 2.0 + dt * dt / 6.0);
    }
    return std::exp(-p * t) * (-std::expm1(-dt)) / delta;
}

// Time derivative: d/dt expdiff(p, q, t) = e^(-p t) - q * expdiff(p, q, t).
inline double expdiff_dt(double p, double q, double t) {
    return std::exp(-p * t) - q * expdiff(p, q, t);
}

}  // namespace bmx::detail
