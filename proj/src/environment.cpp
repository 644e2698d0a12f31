#include "bmx/environment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bmx/constants.hpp"
#include "bmx/errors.hpp"

namespace bmx {

namespace {

constexpr double kPi = 3.14159265358979323846;

// coth(y) for y > 0 with the small-argument expansion 1/y + y/3 taking over
// where 1/tanh(y) would divide two vanishing quantities.
double coth(double y) {
    if (y < 1e-6) {
        return 1.0 / y + y / 3.0;
    }
    return 1.0 / std::tanh(y);
}

}  // namespace

NonThermal::NonThermal(double energy_J) : energy(energy_J) {
    if (!(energy >= 0.0)) {
        throw scenario_error("prescribed diffusion energy must be non-negative");
    }
}

ClassicalThermal::ClassicalThermal(double temperature_K) : temperature(temperature_K) {
    if (!(temperature >= 0.0)) {
        throw scenario_error("temperature must be non-negative");
    }
}

OscillatorBath::OscillatorBath(double omega_rad_s, double temperature_K)
    : omega(omega_rad_s), temperature(temperature_K) {
    if (!(omega > 0.0)) {
        throw scenario_error("oscillator bath frequency must be positive");
    }
    if (!(temperature >= 0.0)) {
        throw scenario_error("temperature must be non-negative");
    }
}

FermiBath::FermiBath(double fermi_temperature_K, double temperature_K)
    : fermi_temperature(fermi_temperature_K), temperature(temperature_K) {
    if (!(fermi_temperature > 0.0)) {
        throw scenario_error("Fermi temperature must be positive");
    }
    if (!(temperature >= 0.0 && temperature <= fermi_temperature)) {
        throw scenario_error("Fermi bath requires 0 <= T <= T_F");
    }
}

BoseBath::BoseBath(double condensation_temperature_K, double temperature_K)
    : condensation_temperature(condensation_temperature_K), temperature(temperature_K) {
    if (!(condensation_temperature > 0.0)) {
        throw scenario_error("condensation temperature must be positive");
    }
    if (!(temperature >= 0.0 && temperature <= condensation_temperature)) {
        throw scenario_error("Bose bath requires 0 <= T <= T_BE");
    }
}

double diffusion_energy(const Environment& env) {
    constexpr double hbar = PhysicalConstants::hbar;
    constexpr double k_B = PhysicalConstants::k_B;
    return std::visit(
        [&](const auto& bath) -> double {
            using T = std::decay_t<decltype(bath)>;
            if constexpr (std::is_same_v<T, NonThermal>) {
                return bath.energy;
            } else if constexpr (std::is_same_v<T, ClassicalThermal>) {
                return k_B * bath.temperature;
            } else if constexpr (std::is_same_v<T, OscillatorBath>) {
                const double zero_point = 0.5 * bath.omega * hbar;
                if (bath.temperature == 0.0) {
                    return zero_point;
                }
                return zero_point * coth(zero_point / (k_B * bath.temperature));
            } else if constexpr (std::is_same_v<T, FermiBath>) {
                const double ratio = bath.temperature / bath.fermi_temperature;
                return 0.6 * k_B * bath.fermi_temperature *
                       (1.0 + (5.0 * kPi * kPi / 12.0) * ratio * ratio);
            } else {
                static_assert(std::is_same_v<T, BoseBath>);
                const double T = bath.temperature;
                const double T_BE = bath.condensation_temperature;
                const double gas = std::sqrt(T * T * T * T * T / (T_BE * T_BE * T_BE));
                const double ratio = T / T_BE;
                const double condensate = T_BE * std::sqrt(1.0 - ratio * ratio * ratio);
                return 0.77 * k_B * (gas + condensate);
            }
        },
        env);
}

bool is_quantum(const Environment& env) {
    return std::visit(
        [](const auto& bath) -> bool {
            using T = std::decay_t<decltype(bath)>;
            return !(std::is_same_v<T, NonThermal> || std::is_same_v<T, ClassicalThermal>);
        },
        env);
}

double fermi_temperature(double number_density, double degeneracy, double mass) {
    if (!(number_density > 0.0) || !(degeneracy > 0.0) || !(mass > 0.0)) {
        throw scenario_error("Fermi temperature requires positive density, degeneracy and mass");
    }
    constexpr double hbar = PhysicalConstants::hbar;
    const double eps_F = (hbar * hbar / (2.0 * mass)) *
                         std::pow(6.0 * kPi * kPi / degeneracy, 2.0 / 3.0) *
                         std::pow(number_density, 2.0 / 3.0);
    return eps_F / PhysicalConstants::k_B;
}

double bose_einstein_temperature(double number_density, double degeneracy, double mass) {
    if (!(number_density > 0.0) || !(degeneracy > 0.0) || !(mass > 0.0)) {
        throw scenario_error(
            "condensation temperature requires positive density, degeneracy and mass");
    }
    constexpr double hbar = PhysicalConstants::hbar;
    return degeneracy * (2.0 * kPi * hbar * hbar / (mass * PhysicalConstants::k_B)) *
           std::pow(number_density / 2.612, 2.0 / 3.0);
}

ClosureParameters closure(double energy) {
    if (!(energy > 0.0)) {
        throw scenario_error("closure requires a positive diffusion energy");
    }
    double gamma = energy / PhysicalConstants::hbar;
    double t_c = 0.5 / gamma;
    // 4*gamma*t_c is exactly 2 in real arithmetic but the divisions above can
    // round.  Nudge whichever factor has the smaller mantissa by one ulp at a
    // time: that factor's one-ulp step moves the product by at most
    // sqrt(0.5)*2^-53 (the mantissas multiply to ~0.5), which is narrower than
    // the rounding window around 2, so the walk lands on the target instead of
    // stepping over it.  In practice one step suffices.
    int it = 0;
    for (; 4.0 * gamma * t_c != 2.0 && it < 256; ++it) {
        int exp_unused = 0;
        const double mg = std::frexp(gamma, &exp_unused);
        const double mt = std::frexp(t_c, &exp_unused);
        const double target = (4.0 * gamma * t_c < 2.0) ? std::numeric_limits<double>::infinity()
                                                        : -std::numeric_limits<double>::infinity();
        if (mg <= mt) {
            t_c = std::nextafter(t_c, target);
        } else {
            gamma = std::nextafter(gamma, target);
        }
    }
    if (4.0 * gamma * t_c != 2.0) {
        throw std::runtime_error("internal error: closure normalisation did not converge");
    }
    return ClosureParameters{t_c, gamma, t_c};
}

double fluctuation_strength(double beta, double mass, double energy) {
    if (!(beta >= 0.0) || !(mass > 0.0) || !(energy >= 0.0)) {
        throw scenario_error(
            "fluctuation strength requires non-negative damping and energy and positive mass");
    }
    return std::sqrt(2.0 * beta * mass * energy);
}

}  // namespace bmx
