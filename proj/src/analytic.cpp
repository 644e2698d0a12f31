#include "bmx/analytic.hpp"

#include <cmath>

#include "bmx/constants.hpp"
#include "bmx/detail/expdiff.hpp"
#include "bmx/errors.hpp"

namespace bmx {

namespace {

using detail::expdiff;

constexpr double kHbar = PhysicalConstants::hbar;

void require_time(double t) {
    if (!(t >= 0.0)) {
        throw scenario_error("moment formulas require a non-negative time");
    }
}

void require_free(const ParticleSpec& spec, const char* op) {
    if (!spec.is_free()) {
        throw scenario_error(std::string(op) + " is closed-form for the free particle only");
    }
}

void require_normal(const CorrelationKernel& kernel, const char* op) {
    if (kernel.exponent() != 0.0) {
        throw scenario_error(std::string(op) + " requires the normal kernel (exponent 0)");
    }
}

void require_damping(const ParticleSpec& spec, const char* op) {
    if (!(spec.gamma > 0.0)) {
        throw scenario_error(std::string(op) + " requires a positive damping rate");
    }
}

double require_energy(const Environment& env, const char* op) {
    const double E = diffusion_energy(env);
    if (!(E > 0.0)) {
        throw scenario_error(std::string(op) + " requires a positive diffusion energy");
    }
    return E;
}

// Retarded correction to the displacement variance of the free inertial
// particle: zero at t = 0 through O(t^2), saturating at 1.  Shared between
// the equilibrium-start displacement formulas and the anomalous
// configuration-space correction.
double retarded_normal_part(double g, double t_c, double t) {
    return -std::expm1(-t / t_c) - (2.0 / t_c) * expdiff(1.0 / t_c, 2.0 * g, t) +
           (1.0 / t_c) * expdiff(1.0 / t_c, 4.0 * g, t);
}

// Diffusion coefficient D(t) = (1/2) d<X^2>/dt of the free inertial particle
// started in momentum equilibrium; also the quantum Langevin D.
double inertial_free_diffusion(double E, double m, double g, double t_c, double t) {
    return (E / (2.0 * g * m)) *
           (-std::expm1(-2.0 * g * t) - 4.0 * g * expdiff(1.0 / t_c, 2.0 * g, t) +
            4.0 * g * expdiff(1.0 / t_c, 4.0 * g, t));
}

}  // namespace

// ---------------------------------------------------------------- classical

double classical_inertial_free_msp(const ParticleSpec& spec, const InitialCondition& init,
                                   const Environment& env, const CorrelationKernel& kernel,
                                   double t) {
    require_time(t);
    require_free(spec, "mean square momentum");
    require_normal(kernel, "mean square momentum");
    const double g = spec.gamma;
    const double m = spec.mass;
    const double E = diffusion_energy(env);
    const double t_c = kernel.correlation_time();
    const double p2_0 = initial_p2(init, m);
    return (p2_0 - m * E) * std::exp(-4.0 * g * t) + m * E -
           4.0 * g * m * E * expdiff(1.0 / t_c, 4.0 * g, t);
}

double classical_inertial_free_force(const ParticleSpec& spec, const InitialCondition& init,
                                     const Environment& env, const CorrelationKernel& kernel,
                                     double t) {
    require_time(t);
    require_free(spec, "thermal force");
    require_normal(kernel, "thermal force");
    const double g = spec.gamma;
    const double m = spec.mass;
    const double E = diffusion_energy(env);
    const double t_c = kernel.correlation_time();
    const double p2 = classical_inertial_free_msp(spec, init, env, kernel, t);
    if (p2 <= 0.0) {
        // <P^2> vanishes only at t = 0 from a sharp momentum start (or for a
        // noiseless environment, where the limit below is zero as well).
        return std::sqrt(2.0 * g * m * E / t_c);
    }
    const double p2_0 = initial_p2(init, m);
    const double dp2 = -4.0 * g * (p2_0 - m * E) * std::exp(-4.0 * g * t) -
                       4.0 * g * m * E *
                           (std::exp(-t / t_c) - 4.0 * g * expdiff(1.0 / t_c, 4.0 * g, t));
    return dp2 / (2.0 * std::sqrt(p2));
}

Observables classical_inertial_free_rmsd(const ParticleSpec& spec, const Environment& env,
                                         const CorrelationKernel& kernel, double t) {
    require_time(t);
    require_free(spec, "inertial displacement");
    require_normal(kernel, "inertial displacement");
    require_damping(spec, "inertial displacement");
    const double g = spec.gamma;
    const double m = spec.mass;
    const double E = diffusion_energy(env);
    const double t_c = kernel.correlation_time();

    Observables obs;
    if (t == 0.0) {
        // Ballistic start: X = 0 but V tends to the thermal velocity.
        obs.X = 0.0;
        obs.V = std::sqrt(E / m);
        obs.D = 0.0;
        return obs;
    }
    const double markov = 2.0 * g * t + std::expm1(-2.0 * g * t);
    const double x2 = (E / (2.0 * m * g * g)) *
                      (markov - 2.0 * g * t_c * retarded_normal_part(g, t_c, t));
    const double X = std::sqrt(x2);
    const double D = inertial_free_diffusion(E, m, g, t_c, t);
    obs.X = X;
    obs.D = D;
    obs.V = D / X;
    return obs;
}

Observables classical_noninertial_free(const ParticleSpec& spec, const Environment& env,
                                       const CorrelationKernel& kernel, double t) {
    require_time(t);
    require_free(spec, "overdamped free displacement");
    require_normal(kernel, "overdamped free displacement");
    require_damping(spec, "overdamped dynamics");
    const double g = spec.gamma;
    const double m = spec.mass;
    const double E = diffusion_energy(env);
    const double t_c = kernel.correlation_time();

    Observables obs;
    if (t == 0.0) {
        obs.X = 0.0;
        obs.V = std::sqrt(E / (m * g * t_c));
        obs.D = 0.0;
        return obs;
    }
    const double x2 = (2.0 * E / (m * g)) * kernel.intensity_integral(t);
    const double X = std::sqrt(x2);
    const double D = (E / (m * g)) * kernel.intensity(t);
    obs.X = X;
    obs.D = D;
    obs.V = D / X;
    return obs;
}

OscillatorMoments classical_noninertial_oscillator(const ParticleSpec& spec,
                                                   const Environment& env,
                                                   const CorrelationKernel& kernel, double t) {
    require_time(t);
    require_normal(kernel, "overdamped oscillator displacement");
    require_damping(spec, "overdamped dynamics");
    const double g = spec.gamma;
    const double m = spec.mass;
    const double w = spec.omega();  // throws scenario_error for a free particle
    const double E = diffusion_energy(env);
    const double t_c = kernel.correlation_time();
    const double tau = g / (2.0 * w * w);  // variance relaxation time

    OscillatorMoments result;
    if (t == 0.0) {
        result.obs.X = 0.0;
        result.obs.V = std::sqrt(E / (m * g * t_c));
        result.obs.D = 0.0;
        result.obs.meanE = 0.0;
        return result;
    }
    const double h = expdiff(1.0 / t_c, 1.0 / tau, t);
    const double G = (E / (2.0 * m * w * w)) * (-std::expm1(-t / tau) - h / tau);
    const double X = std::sqrt(2.0 * G);
    const double D = (E / (2.0 * m * w * w)) * h / (tau * t_c);
    result.G = G;
    result.obs.X = X;
    result.obs.D = D;
    result.obs.V = D / X;
    result.obs.meanE = m * w * w * G;
    return result;
}

namespace {

// The three closed-form anomalous relaxation integrals
// ap_k(theta, t) = integral over [0, t] of (k-1) s^(k-2) (1 - e^(-(t-s)/theta)) ds
// in their k = 2, 3, 4 polynomial-plus-exponential forms.
double anomalous_poly(int k, double theta, double t) {
    switch (k) {
        case 2:
            return t + theta * std::expm1(-t / theta);
        case 3:
            return t * t - 2.0 * t * theta - 2.0 * theta * theta * std::expm1(-t / theta);
        default:  // k == 4
            return t * t * t - 3.0 * theta * t * t + 6.0 * theta * theta * t +
                   6.0 * theta * theta * theta * std::expm1(-t / theta);
    }
}

// Saturating part 1 - e^(-rho t) - rho * h(1/t_c, rho, t) shared by the
// anomalous momentum and oscillator formulas.
double anomalous_normal_part(double t_c, double rho, double t) {
    return -std::expm1(-rho * t) - rho * expdiff(1.0 / t_c, rho, t);
}

int anomalous_integer_exponent(double lambda) {
    if (lambda == 2.0 || lambda == 3.0 || lambda == 4.0) {
        return static_cast<int>(lambda);
    }
    throw scenario_error("this anomalous scenario is closed-form for exponents 2, 3 and 4 only");
}

}  // namespace

double anomalous_msd(AnomalousScenario scenario, double lambda, const ParticleSpec& spec,
                     const Environment& env, const CorrelationKernel& kernel, double t) {
    require_time(t);
    require_damping(spec, "anomalous dynamics");
    if (!(lambda > 1.0)) {
        throw scenario_error("anomalous dynamics requires an exponent greater than 1");
    }
    if (kernel.exponent() != lambda) {
        throw scenario_error("kernel exponent must match the requested anomaly exponent");
    }
    const double g = spec.gamma;
    const double m = spec.mass;
    const double E = diffusion_energy(env);
    const double t_c = kernel.correlation_time();

    switch (scenario) {
        case AnomalousScenario::NonInertialFree: {
            require_free(spec, "anomalous overdamped free displacement");
            return (2.0 * E / (g * m)) * kernel.intensity_integral(t);
        }
        case AnomalousScenario::NonInertialOscillator: {
            const int k = anomalous_integer_exponent(lambda);
            const double w = spec.omega();
            const double tau = g / (2.0 * w * w);
            const double power =
                lambda / std::pow(t_c, lambda - 1.0) * anomalous_poly(k, tau, t);
            return (E / (m * w * w)) * (power + anomalous_normal_part(t_c, 1.0 / tau, t));
        }
        case AnomalousScenario::MomentumSpace: {
            require_free(spec, "anomalous momentum relaxation");
            const int k = anomalous_integer_exponent(lambda);
            const double power =
                lambda / std::pow(t_c, lambda - 1.0) * anomalous_poly(k, 1.0 / (4.0 * g), t);
            return m * E * (power + anomalous_normal_part(t_c, 4.0 * g, t));
        }
        case AnomalousScenario::ConfigInertial:
            break;
    }

    // Configuration-space displacement of the inertial particle started in
    // momentum equilibrium: Markovian core, the normal retarded correction,
    // and the anomalous correction specific to the exponent.
    require_free(spec, "anomalous inertial displacement");
    const int k = anomalous_integer_exponent(lambda);
    const double core = (E / (2.0 * g * g * m)) * (2.0 * g * t + std::expm1(-2.0 * g * t));
    const double normal = -(E * t_c / (g * m)) * retarded_normal_part(g, t_c, t);

    const double g2 = 2.0 * g;
    const double g4 = 4.0 * g;
    const double u2 = std::expm1(-g2 * t);  // e^(-2gt) - 1
    const double u4 = std::expm1(-g4 * t);  // e^(-4gt) - 1
    double anomalous = 0.0;
    if (k == 2) {
        const double bracket = t * t / 2.0 - (t / g + 2.0 / (g2 * g2) * u2) +
                               (t / g4 + 1.0 / (g4 * g4) * u4);
        anomalous = (2.0 * E / (g * m * t_c)) * bracket;
    } else if (k == 3) {
        const double b2 = t * t / g2 - 2.0 * t / (g2 * g2) - (2.0 / (g2 * g2 * g2)) * u2;
        const double b4 = t * t / g4 - 2.0 * t / (g4 * g4) - (2.0 / (g4 * g4 * g4)) * u4;
        anomalous = (3.0 * E / (g * m * t_c * t_c)) * (t * t * t / 3.0 - 2.0 * b2 + b4);
    } else {
        const double b2 = t * t * t / g2 - 3.0 * t * t / (g2 * g2) + 6.0 * t / (g2 * g2 * g2) +
                          (6.0 / (g2 * g2 * g2 * g2)) * u2;
        const double b4 = t * t * t / g4 - 3.0 * t * t / (g4 * g4) + 6.0 * t / (g4 * g4 * g4) +
                          (6.0 / (g4 * g4 * g4 * g4)) * u4;
        anomalous = (4.0 * E / (g * m * t_c * t_c * t_c)) * (t * t * t * t / 4.0 - 2.0 * b2 + b4);
    }
    return core + normal + anomalous;
}

// ------------------------------------------------------------------ quantum

QuantumFpFree quantum_fp_free(const ParticleSpec& spec, const MinimalGaussian& init,
                              const Environment& env, const CorrelationKernel& kernel, double t) {
    require_time(t);
    require_free(spec, "quantum momentum relaxation");
    require_normal(kernel, "quantum momentum relaxation");
    const double g = spec.gamma;
    const double m = spec.mass;
    const double E = diffusion_energy(env);
    const double t_c = kernel.correlation_time();
    const double a = init.a;

    const double c = 2.0 * a * E / kHbar;  // equilibrium-to-initial variance ratio
    const double decay = std::exp(-4.0 * g * t);
    const double h4 = expdiff(1.0 / t_c, 4.0 * g, t);
    const double beta = (1.0 - c) * decay + c * (1.0 - 4.0 * g * h4);
    if (!(beta > 0.0)) {
        throw validity_error("quantum momentum variance lost positivity");
    }
    const double relax = (1.0 - c) * decay + c * (std::exp(-t / t_c) - 4.0 * g * h4);

    QuantumFpFree result;
    result.A = (m * kHbar / (4.0 * a)) * beta;
    result.state.t = t;
    result.state.sigma_p = std::sqrt(2.0 * result.A);
    result.state.sigma_x = kHbar / std::sqrt(8.0 * result.A);
    result.obs.P = result.state.sigma_p;
    result.obs.X = result.state.sigma_x;
    result.obs.F = -g * std::sqrt(2.0 * m * kHbar / a) * relax / std::sqrt(beta);
    result.obs.V = g * std::sqrt(2.0 * kHbar * a / m) * relax / std::pow(beta, 1.5);
    result.obs.D = g * (kHbar * a / m) * relax / (beta * beta);
    result.d_valid = relax >= 0.0;
    return result;
}

Observables quantum_fp_free_closed(const ParticleSpec& spec, const Environment& env, double t) {
    require_time(t);
    require_free(spec, "closed quantum relaxation");
    const double m = spec.mass;
    const double E = require_energy(env, "closed quantum relaxation");
    const double t_q = kHbar / (2.0 * E);  // the single remaining time scale

    const double u = std::exp(-t / t_q);
    const double beta = 1.0 + 2.0 * u * (u - 1.0);  // >= 1/2 for all t
    const double shape = u * (2.0 * u - 1.0);

    Observables obs;
    obs.P = std::sqrt(m * E * beta);
    obs.F = -std::sqrt(4.0 * m * E * E * E / (kHbar * kHbar)) * shape / std::sqrt(beta);
    obs.V = std::sqrt(E / m) * shape / std::pow(beta, 1.5);
    if (t <= t_q * std::log(2.0)) {
        obs.D = (kHbar / (2.0 * m)) * shape / (beta * beta);
    }
    return obs;
}

QuantumLangevinFree quantum_langevin_free(const ParticleSpec& spec, const Environment& env,
                                          const CorrelationKernel& kernel, double t) {
    require_time(t);
    require_free(spec, "quantum Langevin moments");
    require_normal(kernel, "quantum Langevin moments");
    require_damping(spec, "quantum Langevin moments");
    const double g = spec.gamma;
    const double m = spec.mass;
    const double E = require_energy(env, "quantum Langevin moments");
    const double t_c = kernel.correlation_time();

    const double h2 = expdiff(1.0 / t_c, 2.0 * g, t);
    const double h4 = expdiff(1.0 / t_c, 4.0 * g, t);

    const double p2 = m * E * (1.0 - 4.0 * g * h4);
    const double markov = 2.0 * g * t + std::expm1(-2.0 * g * t);
    const double retarded = (E / (g * m)) * (t_c * std::expm1(-t / t_c) + 2.0 * h2 - h4);
    const double x2 = kHbar * kHbar / (4.0 * m * E) + (E / (2.0 * m * g * g)) * markov + retarded;

    QuantumLangevinFree result;
    result.state.t = t;
    result.state.sigma_p = std::sqrt(p2);
    result.state.sigma_x = std::sqrt(x2);
    result.state.cov_xp =
        2.0 * E * (-std::expm1(-2.0 * g * t) / (2.0 * g) - std::expm1(-4.0 * g * t) / (4.0 * g) +
                   h2 + h4);
    result.obs.X = result.state.sigma_x;
    result.obs.P = result.state.sigma_p;
    const double D = inertial_free_diffusion(E, m, g, t_c, t);
    result.obs.D = D;
    result.obs.V = D / result.state.sigma_x;
    return result;
}

QuantumSmoluchowskiFree quantum_smoluchowski_free(const ParticleSpec& spec,
                                                  const MinimalGaussian& init,
                                                  const Environment& env,
                                                  const CorrelationKernel& kernel, double t) {
    require_time(t);
    require_free(spec, "quantum overdamped free evolution");
    require_normal(kernel, "quantum overdamped free evolution");
    require_damping(spec, "overdamped dynamics");
    const double g = spec.gamma;
    const double m = spec.mass;
    const double E = diffusion_energy(env);

    QuantumSmoluchowskiFree result;
    result.b = kHbar * init.a / (4.0 * m) + (E / (m * g)) * kernel.intensity_integral(t);
    result.state.t = t;
    result.state.sigma_x = std::sqrt(2.0 * result.b);
    result.state.sigma_p = kHbar / std::sqrt(8.0 * result.b);
    result.obs.X = result.state.sigma_x;
    result.obs.P = result.state.sigma_p;
    const double D = (E / (m * g)) * kernel.intensity(t);
    result.obs.D = D;
    result.obs.V = D / result.state.sigma_x;
    result.obs.F = -4.0 * kHbar * D / std::pow(8.0 * result.b, 1.5);
    return result;
}

QuantumSmoluchowskiOscillator quantum_smoluchowski_oscillator(const ParticleSpec& spec,
                                                              const MinimalGaussian& init,
                                                              const Environment& env,
                                                              const CorrelationKernel& kernel,
                                                              double t) {
    require_time(t);
    require_normal(kernel, "quantum overdamped oscillator evolution");
    require_damping(spec, "overdamped dynamics");
    const double g = spec.gamma;
    const double m = spec.mass;
    const double k = spec.stiffness();  // throws scenario_error for a free particle
    const double E = diffusion_energy(env);
    const double t_c = kernel.correlation_time();
    const double a = init.a;

    const double kappa = 2.0 * k / (m * g);
    const double decay = std::exp(-kappa * t);
    const double h = expdiff(1.0 / t_c, kappa, t);

    QuantumSmoluchowskiOscillator result;
    result.B = (kHbar * a / m) * decay +
               (2.0 * E / k) * (-std::expm1(-kappa * t) - kappa * h);
    result.state.t = t;
    result.state.sigma_x = std::sqrt(result.B / 2.0);
    result.state.sigma_p = kHbar / std::sqrt(2.0 * result.B);
    result.obs.X = result.state.sigma_x;
    result.obs.P = result.state.sigma_p;
    const double D = E * h / (m * g * t_c) - (kHbar * a * k / (2.0 * g * m * m)) * decay;
    result.obs.D = D;
    result.obs.V = D / result.state.sigma_x;
    result.obs.F = -4.0 * kHbar * D / std::pow(2.0 * result.B, 1.5);
    return result;
}

AnomalousAsymptotics quantum_anomalous_asymptotics(QuantumAnomalousScenario scenario,
                                                   double lambda, const ParticleSpec& spec,
                                                   const Environment& env, double t_c, double t) {
    if (!(lambda > 1.0)) {
        throw scenario_error("anomalous dynamics requires an exponent greater than 1");
    }
    if (!(t_c > 0.0)) {
        throw scenario_error("correlation time must be positive");
    }
    if (!(t > 0.0)) {
        throw scenario_error("asymptotic anomalous moments require a positive time");
    }
    require_free(spec, "anomalous quantum asymptotics");
    const double m = spec.mass;
    const double E = require_energy(env, "anomalous quantum asymptotics");

    AnomalousAsymptotics result;
    if (scenario == QuantumAnomalousScenario::Inertial) {
        result.p2 = lambda * m * E * std::pow(t / t_c, lambda - 1.0);
        result.x2 = kHbar * kHbar / (4.0 * result.p2);
    } else {
        require_damping(spec, "anomalous overdamped dynamics");
        result.x2 = (2.0 * E / (m * spec.gamma)) * std::pow(t, lambda) / std::pow(t_c, lambda - 1.0);
        result.p2 = kHbar * kHbar / (4.0 * result.x2);
    }
    return result;
}

}  // namespace bmx
