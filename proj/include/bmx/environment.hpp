#pragma once

#include <variant>

namespace bmx {

// Heat-bath variants.  Each constructor validates its physical domain, and
// the diffusion energy a bath produces is the single scale through which the
// environment enters every dynamical formula downstream.

// A directly prescribed diffusion energy, for dimensionless studies and for
// deterministic zero-noise runs.  Default-constructed it prescribes zero
// noise (and keeps the Environment variant default-constructible).
struct NonThermal {
    NonThermal() : energy(0.0) {}
    explicit NonThermal(double energy_J);
    double energy;  // J, >= 0
};

// Classical thermal bath: E = k_B * T.
struct ClassicalThermal {
    explicit ClassicalThermal(double temperature_K);
    double temperature;  // K, >= 0
};

// Quantum harmonic-oscillator bath of frequency omega at temperature T:
// E = (omega*hbar/2) * coth(omega*hbar / 2 k_B T), bounded below by the
// zero-point energy omega*hbar/2 and approaching k_B*T at high temperature.
struct OscillatorBath {
    OscillatorBath(double omega_rad_s, double temperature_K);
    double omega;        // rad/s, > 0
    double temperature;  // K, >= 0
};

// Ideal Fermi gas in its low-temperature expansion; requires T <= T_F.
struct FermiBath {
    FermiBath(double fermi_temperature_K, double temperature_K);
    double fermi_temperature;  // K, > 0
    double temperature;        // K, in [0, T_F]
};

// Ideal Bose gas at or below condensation; requires T <= T_BE.
struct BoseBath {
    BoseBath(double condensation_temperature_K, double temperature_K);
    double condensation_temperature;  // K, > 0
    double temperature;               // K, in [0, T_BE]
};

using Environment =
    std::variant<NonThermal, ClassicalThermal, OscillatorBath, FermiBath, BoseBath>;

// The bath's diffusion energy in joules: the prescribed value (NonThermal),
// k_B*T (ClassicalThermal), or the bath's zero-point / internal energy
// (OscillatorBath, FermiBath, BoseBath).
double diffusion_energy(const Environment& env);

// True for the bath variants whose diffusion energy stays finite at T = 0.
bool is_quantum(const Environment& env);

// Fermi temperature of an ideal Fermi gas:
// T_F = eps_F/k_B, eps_F = (hbar^2/2m) * (6 pi^2/g)^(2/3) * n^(2/3).
double fermi_temperature(double number_density, double degeneracy, double mass);

// Bose-Einstein condensation temperature:
// T_BE = g * (2 pi hbar^2 / m k_B) * (n / 2.612)^(2/3).
double bose_einstein_temperature(double number_density, double degeneracy, double mass);

// The closure collapsing all microscopic scales to one energy: a = t_c =
// hbar/2E and gamma = E/hbar.  The returned values satisfy 4*gamma*t_c == 2
// exactly in double arithmetic, so closure parameters can never land on the
// 4*gamma*t_c = 1 degeneracy of the relaxation formulas.
struct ClosureParameters {
    double a;      // s
    double gamma;  // 1/s
    double t_c;    // s
};
ClosureParameters closure(double energy);

// Fluctuation-dissipation noise amplitude b = sqrt(2 * beta * m * E) for a
// damping rate beta, mass m and diffusion energy E.
double fluctuation_strength(double beta, double mass, double energy);

}  // namespace bmx
