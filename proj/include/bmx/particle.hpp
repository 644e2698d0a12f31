#pragma once

#include <variant>

namespace bmx {

// Confining potential of the tagged particle.
struct FreePotential {};

struct HarmonicPotential {
    explicit HarmonicPotential(double omega_rad_s);
    double omega;  // rad/s, > 0
};

using Potential = std::variant<FreePotential, HarmonicPotential>;

// Mass, damping and potential of the tagged particle.  One damping rate
// gamma is stored; the inertial (phase-space) equations apply the effective
// damping 2*gamma while the non-inertial (overdamped) equations apply gamma
// itself.  Both conventions are wired into the formulas, never into the
// stored value.
struct ParticleSpec {
    ParticleSpec(double mass_kg, double gamma_per_s, Potential pot = FreePotential{});

    double mass;   // kg, > 0
    double gamma;  // 1/s, >= 0
    Potential potential;

    bool is_free() const;
    // Oscillator frequency; throws scenario_error for a free particle.
    double omega() const;
    // Stiffness k = m * omega^2; throws scenario_error for a free particle.
    double stiffness() const;
};

// Initial second moments of the ensemble (means are zero in every scenario).
struct SharpOrigin {};  // delta-function start: all initial moments zero

struct MomentumVariance {  // <P^2(0)> prescribed, <X^2(0)> = 0
    explicit MomentumVariance(double p2_0_SI);
    double p2_0;  // (kg m/s)^2, >= 0
};

struct MinimalGaussian {  // minimal-uncertainty Gaussian of width parameter a
    explicit MinimalGaussian(double a_s);
    double a;  // s, > 0; <X^2(0)> = a*hbar/2m, <P^2(0)> = hbar*m/2a
};

using InitialCondition = std::variant<SharpOrigin, MomentumVariance, MinimalGaussian>;

// The second moments implied by an initial condition for a particle of mass m.
double initial_x2(const InitialCondition& init, double mass);
double initial_p2(const InitialCondition& init, double mass);

}  // namespace bmx
