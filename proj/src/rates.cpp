#include "bmx/rates.hpp"

#include <algorithm>
#include <cmath>

#include "bmx/constants.hpp"
#include "bmx/errors.hpp"
#include "bmx/kernel.hpp"

namespace bmx {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHbar = PhysicalConstants::hbar;

double require_rate_energy(const Environment& env) {
    const double E = diffusion_energy(env);
    if (!(E > 0.0)) {
        throw scenario_error("escape rates require a positive diffusion energy");
    }
    return E;
}

std::string friction_note(double gamma, double omega_b) {
    if (gamma >= 10.0 * omega_b) {
        return "strong friction";
    }
    if (gamma <= 0.1 * omega_b) {
        return "weak friction";
    }
    return "intermediate friction";
}

}  // namespace

BarrierSpec::BarrierSpec(double omega_a_, double omega_b_, double delta_V_)
    : omega_a(omega_a_), omega_b(omega_b_), delta_V(delta_V_) {
    if (!(omega_a > 0.0) || !(omega_b > 0.0)) {
        throw scenario_error("barrier curvature frequencies must be positive");
    }
    if (!(delta_V > 0.0)) {
        throw scenario_error("barrier height must be positive");
    }
}

RateResult kramers_classical(const ParticleSpec& spec, const BarrierSpec& barrier,
                             const Environment& env) {
    const double E = require_rate_energy(env);
    const double g = spec.gamma;
    const double wa = barrier.omega_a;
    const double wb = barrier.omega_b;
    RateResult result;
    result.rate = (wa / (2.0 * kPi * wb)) * (std::sqrt(g * g + wb * wb) - g) *
                  std::exp(-barrier.delta_V / E);
    result.condition_margin = E;
    result.regime_note = "inertial, stationary, " + friction_note(g, wb);
    return result;
}

RateResult kramers_classical_nonmarkov(const ParticleSpec& spec, const BarrierSpec& barrier,
                                       const Environment& env, const CorrelationKernel& kernel,
                                       double t, double t_max) {
    if (!(t >= 0.0)) {
        throw scenario_error("transient rates require a non-negative time");
    }
    if (kernel.exponent() != 0.0) {
        throw scenario_error("transient rates are modelled for the normal kernel only");
    }
    if (!(spec.gamma > 0.0)) {
        throw scenario_error("transient rates require a positive damping rate");
    }
    const double E = require_rate_energy(env);
    const double g = spec.gamma;
    const double wa = barrier.omega_a;
    const double wb = barrier.omega_b;

    // The growing exponential is meaningful only while the noise builds up,
    // so the evaluation time is clamped.
    const double cap = t_max < 0.0 ? 20.0 / g : t_max;
    RateResult result;
    result.time_capped = t > cap;
    const double te = std::min(t, cap);

    const double s = std::sqrt(g * g + wb * wb);
    result.rate = std::exp(2.0 * g * te) * (wa / (2.0 * kPi)) *
                  std::sqrt((g + s) / (2.0 * g * kernel.intensity(te) + g + s)) *
                  std::exp(-barrier.delta_V / E);
    result.condition_margin = E;
    result.regime_note = result.time_capped
                             ? "inertial, transient evaluated at the time cap"
                             : "inertial, transient (noise build-up)";
    return result;
}

RateResult kramers_quantum_inertial(const ParticleSpec& spec, const BarrierSpec& barrier,
                                    const Environment& env) {
    // Identical expression with the diffusion energy of a quantum bath; the
    // shared code path keeps the classical bridge exact.
    RateResult result = kramers_classical(spec, barrier, env);
    result.regime_note = "inertial quantum, stationary, " +
                         friction_note(spec.gamma, barrier.omega_b);
    return result;
}

RateResult kramers_quantum_inertial_nonmarkov(const ParticleSpec& spec, const BarrierSpec& barrier,
                                              const Environment& env,
                                              const CorrelationKernel& kernel, double t,
                                              double t_max) {
    RateResult result = kramers_classical_nonmarkov(spec, barrier, env, kernel, t, t_max);
    result.regime_note = result.time_capped
                             ? "inertial quantum, transient evaluated at the time cap"
                             : "inertial quantum, transient (noise build-up)";
    return result;
}

RateResult kramers_quantum_noninertial(const ParticleSpec& spec, const BarrierSpec& barrier,
                                       const Environment& env, double a_param) {
    const double E = require_rate_energy(env);
    const double m = spec.mass;
    const double wb = barrier.omega_b;
    const double wb2 = wb * wb;

    const double a_upper = m * kHbar * wb2 / (2.0 * E);
    RateResult result;
    result.condition_margin = a_param >= 0.0 ? a_upper - a_param : a_param;
    if (!(a_param >= 0.0) || !(a_param < a_upper)) {
        throw validity_error(
            "ordering parameter outside [0, m*hbar*omega_b^2 / 2E); no overdamped quantum rate");
    }

    const double disc = m * m * wb2 * wb2 * kHbar * kHbar - 4.0 * a_param * a_param * E * E;
    result.rate = (wb2 * wb2 * m * kHbar * kHbar / (4.0 * kPi * E)) *
                  std::exp(-barrier.delta_V / E) / std::sqrt(disc);
    result.regime_note = "overdamped quantum, stationary";
    return result;
}

double a_param_zero() { return 0.0; }

double a_param_half_mass_omega_b(const ParticleSpec& spec, const BarrierSpec& barrier) {
    return 0.5 * spec.mass * barrier.omega_b;
}

double a_param_half_mass_over_tc(const ParticleSpec& spec, double t_c) {
    if (!(t_c > 0.0)) {
        throw scenario_error("correlation time must be positive");
    }
    return 0.5 * spec.mass / t_c;
}

}  // namespace bmx
