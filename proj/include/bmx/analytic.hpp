#pragma once

#include <optional>

#include "bmx/environment.hpp"
#include "bmx/kernel.hpp"
#include "bmx/particle.hpp"

namespace bmx {

// Second moments of the zero-mean Gaussian state at time t.
struct GaussianState {
    double t = 0.0;
    double sigma_x = 0.0;          // RMS displacement, m
    double sigma_p = 0.0;          // RMS momentum, kg m/s
    std::optional<double> cov_xp;  // <P X>, kg m^2/s, where the scenario defines it
};

// Derived observables.  Fields a scenario does not define stay empty; D = X*V
// holds to round-off whenever both are present.
struct Observables {
    std::optional<double> X;      // RMS displacement, m
    std::optional<double> P;      // RMS momentum, kg m/s
    std::optional<double> V;      // instantaneous velocity dX/dt, m/s
    std::optional<double> F;      // force dP/dt, N
    std::optional<double> D;      // diffusion coefficient X*V, m^2/s
    std::optional<double> meanE;  // mean energy, J, where defined
};

// ---------------------------------------------------------------- classical

// Mean square momentum of the free inertial particle (normal kernel):
// <P^2(t)> relaxes from p2_0 toward m*E with rate 4*gamma, retarded by the
// noise build-up over t_c.  Requires a free potential and lambda = 0.
double classical_inertial_free_msp(const ParticleSpec& spec, const InitialCondition& init,
                                   const Environment& env, const CorrelationKernel& kernel,
                                   double t);

// Thermal force F = d sqrt(<P^2>)/dt of the same scenario, from the closed-
// form derivative.  At t = 0 with p2_0 = 0 returns the finite short-time
// limit sqrt(2*gamma*m*E/t_c).
double classical_inertial_free_force(const ParticleSpec& spec, const InitialCondition& init,
                                     const Environment& env, const CorrelationKernel& kernel,
                                     double t);

// RMS displacement, instantaneous velocity and diffusion coefficient of the
// free inertial particle started at the origin in momentum equilibrium
// (<X^2(0)> = 0, <P^2(0)> = m*E).  Fills X, V, D.
Observables classical_inertial_free_rmsd(const ParticleSpec& spec, const Environment& env,
                                         const CorrelationKernel& kernel, double t);

// Overdamped free particle from a sharp origin.  Fills X, V, D;
// D = (E/m*gamma) * I(t) coincides with the configuration-space diffusion
// coefficient.
Observables classical_noninertial_free(const ParticleSpec& spec, const Environment& env,
                                       const CorrelationKernel& kernel, double t);

// Overdamped harmonic oscillator from a sharp origin: <X^2> = 2 G(t) with the
// relaxation time tau_r = gamma/2 omega^2.  Fills X, V, D, meanE and returns
// G alongside.
struct OscillatorMoments {
    Observables obs;
    double G = 0.0;  // displacement-variance kernel, <X^2> = 2G, m^2
};
OscillatorMoments classical_noninertial_oscillator(const ParticleSpec& spec,
                                                   const Environment& env,
                                                   const CorrelationKernel& kernel, double t);

// Anomalous mean square displacement/momentum for the four closed-form
// settings.  NonInertialFree accepts any lambda > 1; the other three are
// closed-form for lambda in {2, 3, 4}.  ConfigInertial assumes momentum
// equilibrium at t = 0 (<P^2(0)> = m*E).  Returns <X^2> in m^2, except
// MomentumSpace which returns <P^2> in (kg m/s)^2.
enum class AnomalousScenario { NonInertialFree, NonInertialOscillator, MomentumSpace, ConfigInertial };
double anomalous_msd(AnomalousScenario scenario, double lambda, const ParticleSpec& spec,
                     const Environment& env, const CorrelationKernel& kernel, double t);

// ------------------------------------------------------------------ quantum

// Free-particle quantum evolution in the momentum-space Fokker-Planck
// description from a minimal-uncertainty Gaussian of width a: the momentum
// variance is 2A(t), and sigma_x = hbar/sqrt(8A) keeps sigma_x*sigma_p =
// hbar/2 exactly.  D is meaningful only while the relaxation kernel driving
// it stays nonnegative; d_valid records that condition.
struct QuantumFpFree {
    double A = 0.0;  // half the momentum variance, (kg m/s)^2
    GaussianState state;
    Observables obs;      // P, X, V, F, D
    bool d_valid = true;  // false once the force/diffusion kernel turns negative
};
QuantumFpFree quantum_fp_free(const ParticleSpec& spec, const MinimalGaussian& init,
                              const Environment& env, const CorrelationKernel& kernel, double t);

// The same free quantum evolution with every microscopic scale eliminated by
// the closure a = t_c = hbar/2E, gamma = E/hbar, leaving the single quantum
// time t_q = hbar/2E.  Fills P, F, V, D; D is reported only up to its zero
// crossing at t = t_q*ln 2 (empty beyond).
Observables quantum_fp_free_closed(const ParticleSpec& spec, const Environment& env, double t);

// Free-particle quantum Langevin moments started from the minimal-uncertainty
// state with <P^2(0)> = m*E (width a = hbar/2E).  The position spread grows
// diffusively, so sigma_x*sigma_p > hbar/2 for t > 0 with equality only at
// t = 0.  Fills X, P, V, D and the momentum-position covariance.
struct QuantumLangevinFree {
    GaussianState state;  // includes cov_xp
    Observables obs;      // X, P, V, D
};
QuantumLangevinFree quantum_langevin_free(const ParticleSpec& spec, const Environment& env,
                                          const CorrelationKernel& kernel, double t);

// Overdamped free quantum evolution: <X^2> = 2 b(t) with b(t) = hbar*a/4m +
// (E/m*gamma)*J(t); sigma_x*sigma_p = hbar/2 for all t, and the quantum force
// is attractive (F <= 0) throughout.
struct QuantumSmoluchowskiFree {
    double b = 0.0;  // half the displacement variance, m^2
    GaussianState state;
    Observables obs;  // X, P, V, F, D
};
QuantumSmoluchowskiFree quantum_smoluchowski_free(const ParticleSpec& spec,
                                                  const MinimalGaussian& init,
                                                  const Environment& env,
                                                  const CorrelationKernel& kernel, double t);

// Overdamped harmonic quantum evolution: <X^2> = B(t)/2 relaxing toward E/k
// with rate kappa = 2k/m*gamma; sigma_x*sigma_p = hbar/2 for all t.
struct QuantumSmoluchowskiOscillator {
    double B = 0.0;  // twice the displacement variance, m^2
    GaussianState state;
    Observables obs;  // X, P, V, F, D
};
QuantumSmoluchowskiOscillator quantum_smoluchowski_oscillator(const ParticleSpec& spec,
                                                              const MinimalGaussian& init,
                                                              const Environment& env,
                                                              const CorrelationKernel& kernel,
                                                              double t);

// Long-time anomalous quantum fluctuations: the growing moment follows the
// classical anomalous law with E_hbar, and the conjugate moment is pinned by
// the minimal Heisenberg product <P^2><X^2> = hbar^2/4.
enum class QuantumAnomalousScenario { Inertial, NonInertial };
struct AnomalousAsymptotics {
    double p2 = 0.0;  // (kg m/s)^2
    double x2 = 0.0;  // m^2
};
AnomalousAsymptotics quantum_anomalous_asymptotics(QuantumAnomalousScenario scenario,
                                                   double lambda, const ParticleSpec& spec,
                                                   const Environment& env, double t_c, double t);

}  // namespace bmx
