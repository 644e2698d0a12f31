#include "bmx/particle.hpp"

#include "bmx/constants.hpp"
#include "bmx/errors.hpp"

namespace bmx {

HarmonicPotential::HarmonicPotential(double omega_rad_s) : omega(omega_rad_s) {
    if (!(omega > 0.0)) {
        throw scenario_error("oscillator frequency must be positive");
    }
}

ParticleSpec::ParticleSpec(double mass_kg, double gamma_per_s, Potential pot)
    : mass(mass_kg), gamma(gamma_per_s), potential(pot) {
    if (!(mass > 0.0)) {
        throw scenario_error("particle mass must be positive");
    }
    if (!(gamma >= 0.0)) {
        throw scenario_error("damping rate must be non-negative");
    }
}

bool ParticleSpec::is_free() const { return std::holds_alternative<FreePotential>(potential); }

double ParticleSpec::omega() const {
    if (const auto* h = std::get_if<HarmonicPotential>(&potential)) {
        return h->omega;
    }
    throw scenario_error("free particle has no oscillator frequency");
}

double ParticleSpec::stiffness() const {
    const double w = omega();
    return mass * w * w;
}

MomentumVariance::MomentumVariance(double p2_0_SI) : p2_0(p2_0_SI) {
    if (!(p2_0 >= 0.0)) {
        throw scenario_error("initial momentum variance must be non-negative");
    }
}

MinimalGaussian::MinimalGaussian(double a_s) : a(a_s) {
    if (!(a > 0.0)) {
        throw scenario_error("minimal Gaussian width parameter must be positive");
    }
}

double initial_x2(const InitialCondition& init, double mass) {
    return std::visit(
        [&](const auto& ic) -> double {
            using T = std::decay_t<decltype(ic)>;
            if constexpr (std::is_same_v<T, MinimalGaussian>) {
                return ic.a * PhysicalConstants::hbar / (2.0 * mass);
            } else {
                return 0.0;
            }
        },
        init);
}

double initial_p2(const InitialCondition& init, double mass) {
    return std::visit(
        [&](const auto& ic) -> double {
            using T = std::decay_t<decltype(ic)>;
            if constexpr (std::is_same_v<T, SharpOrigin>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, MomentumVariance>) {
                return ic.p2_0;
            } else {
                static_assert(std::is_same_v<T, MinimalGaussian>);
                return PhysicalConstants::hbar * mass / (2.0 * ic.a);
            }
        },
        init);
}

}  // namespace bmx
