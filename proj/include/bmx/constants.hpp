#pragma once

namespace bmx {

// CODATA values, fixed at compile time and never configurable.
struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34;  // reduced Planck constant, J s
    static constexpr double k_B = 1.380649e-23;      // Boltzmann constant, J/K
};

}  // namespace bmx
