#pragma once

#include <string>

#include "bmx/environment.hpp"
#include "bmx/kernel.hpp"
#include "bmx/particle.hpp"

namespace bmx {

// Double-well geometry: curvature frequency omega_a at the metastable
// minimum, omega_b at the barrier top, and barrier height delta_V (J).
struct BarrierSpec {
    double omega_a = 0.0;
    double omega_b = 0.0;
    double delta_V = 0.0;

    BarrierSpec(double omega_a_, double omega_b_, double delta_V_);
};

struct RateResult {
    double rate = 0.0;
    bool valid = true;             // false when a validity condition failed
    double condition_margin = 0.0; // distance to the nearest validity bound
    bool time_capped = false;      // transient time was clamped to t_max
    std::string regime_note;       // human-readable regime description
};

// Stationary escape rate for inertial classical dynamics:
//   Gamma = (omega_a / 2 pi omega_b) (sqrt(gamma^2 + omega_b^2) - gamma)
//           * exp(-delta_V / E)
// Throws scenario_error if the environment's diffusion energy is zero.
RateResult kramers_classical(const ParticleSpec& spec, const BarrierSpec& barrier,
                             const Environment& env);

// Time-dependent escape rate while the bath correlations build up:
//   Gamma(t) = e^{2 gamma t} (omega_a / 2 pi)
//              sqrt((gamma + s) / (2 gamma I(t/t_c) + gamma + s))
//              exp(-delta_V / E),    s = sqrt(gamma^2 + omega_b^2).
// t is clamped to t_max (default 20/gamma when t_max < 0) and the clamp is
// reported via time_capped.
RateResult kramers_classical_nonmarkov(const ParticleSpec& spec, const BarrierSpec& barrier,
                                       const Environment& env, const CorrelationKernel& kernel,
                                       double t, double t_max = -1.0);

// Inertial quantum escape rate: identical expression with the thermal energy
// replaced by the environment's quantum diffusion energy.  Shares the
// classical code path exactly (bit-for-bit at equal energies).
RateResult kramers_quantum_inertial(const ParticleSpec& spec, const BarrierSpec& barrier,
                                    const Environment& env);

// Transient version of the inertial quantum rate.
RateResult kramers_quantum_inertial_nonmarkov(const ParticleSpec& spec, const BarrierSpec& barrier,
                                              const Environment& env,
                                              const CorrelationKernel& kernel, double t,
                                              double t_max = -1.0);

// Overdamped quantum escape rate with ordering parameter a:
//   Gamma = (omega_b^4 m hbar^2 / 4 pi E) exp(-delta_V / E)
//           / sqrt(m^2 omega_b^4 hbar^2 - 4 a^2 E^2)
// Valid only for 0 <= a < m hbar omega_b^2 / (2 E); outside that window a
// validity_error is thrown.  condition_margin reports the distance of a from
// the upper bound.
RateResult kramers_quantum_noninertial(const ParticleSpec& spec, const BarrierSpec& barrier,
                                       const Environment& env, double a_param);

// Canonical choices for the ordering parameter.
double a_param_zero();
double a_param_half_mass_omega_b(const ParticleSpec& spec, const BarrierSpec& barrier);
double a_param_half_mass_over_tc(const ParticleSpec& spec, double t_c);

}  // namespace bmx
