#pragma once

#include <vector>

#include "bmx/environment.hpp"
#include "bmx/kernel.hpp"
#include "bmx/particle.hpp"

namespace bmx {

// Uniform one-dimensional cell-centered grid over [y_min, y_max].
struct Grid1D {
    double y_min = 0.0;
    double y_max = 0.0;
    std::size_t n_cells = 0;

    Grid1D(double y_min_, double y_max_, std::size_t n_cells_);

    double dy() const { return (y_max - y_min) / static_cast<double>(n_cells); }
    double center(std::size_t i) const {
        return y_min + (static_cast<double>(i) + 0.5) * dy();
    }
};

// Density recorded at one requested output time.  `values` holds the cell
// averages; `norm`, `mean` and `variance` are discrete moments of the grid
// density.  `initial_variance` is the discrete variance of the regularised
// delta at t = 0 (an exact offset for the reference moments), and
// `clipped_mass` accumulates any negative mass removed after update steps.
struct DensitySnapshot {
    double t = 0.0;
    std::vector<double> values;
    double norm = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double initial_variance = 0.0;
    double clipped_mass = 0.0;
};

// Momentum-space relaxation: drift a(p) = -2*gamma*p, time-dependent
// diffusion D(t) = 2*gamma*m*E * I(t).  Starts from a regularised delta at
// p = 0 and relaxes toward the Maxwell distribution with variance m*E.
// Conservative finite-volume update (Fromm advection, centered diffusion),
// zero-flux boundaries; throws validity_error if density reaches a boundary.
std::vector<DensitySnapshot> solve_rayleigh(const ParticleSpec& spec, const Environment& env,
                                            const CorrelationKernel& kernel, const Grid1D& grid,
                                            double dt, double t_end,
                                            const std::vector<double>& record_times);

// Position-space overdamped dynamics: drift a(x) = -V'(x)/(gamma m),
// diffusion D(t) = (E/gamma m) * I(t).  Same scheme and error behaviour.
std::vector<DensitySnapshot> solve_smoluchowski(const ParticleSpec& spec, const Environment& env,
                                                const CorrelationKernel& kernel, const Grid1D& grid,
                                                double dt, double t_end,
                                                const std::vector<double>& record_times);

}  // namespace bmx
