#pragma once

#include <cstdint>
#include <vector>

#include "bmx/environment.hpp"
#include "bmx/kernel.hpp"
#include "bmx/particle.hpp"

namespace bmx {

// Euler-Maruyama run configuration.  dt must respect the stability bound
// dt <= min(t_c, 1/(2 gamma), 1/omega) / 20 unless override_stability is set.
// record_times are snapped to the nearest step.
struct SimulationConfig {
    double dt = 0.0;
    double t_end = 0.0;
    std::uint64_t n_paths = 0;
    std::uint64_t seed = 0;
    std::vector<double> record_times;
    double x0 = 0.0;  // deterministic offsets added to the sampled initial
    double p0 = 0.0;  // state; with a zero-noise environment they reduce the
                      // run to the classical trajectory
    bool override_stability = false;
    unsigned threads = 0;  // worker threads, 0 = one per hardware core; the
                           // statistics are bit-identical for any thread count
                           // (fixed block reduction order)
};

// Per-record-time sample moments with standard errors.  m2_* are raw second
// moments (about zero, which is the exact ensemble mean in every scenario);
// se_* = sample standard deviation of the underlying variable / sqrt(n).
// Non-inertial runs leave the momentum-related vectors empty.
struct EnsembleStats {
    std::vector<double> times;
    std::vector<double> mean_x, mean_p;
    std::vector<double> m2_x, m2_p;
    std::vector<double> mean_px;
    std::vector<double> se_mean_x, se_mean_p;
    std::vector<double> se_m2_x, se_m2_p;
    std::vector<double> se_mean_px;
    std::uint64_t n_paths = 0;
};

// Phase-space Langevin dynamics with effective damping 2*gamma:
//   dP = (-V'(X) - 2*gamma*P) dt + sqrt(4*gamma*m*E) * sqrt(I(t_n) dt) N(0,1)
//   dX = (P/m) dt
// One independent counter-seeded RNG stream per path keeps results
// reproducible and independent of thread scheduling.
EnsembleStats simulate_inertial(const ParticleSpec& spec, const Environment& env,
                                const CorrelationKernel& kernel, const InitialCondition& init,
                                const SimulationConfig& cfg);

// Overdamped Langevin dynamics with damping gamma:
//   dX = -(1/gamma m) V'(X) dt + sqrt((2E/gamma m) * I(t_n) dt) N(0,1)
EnsembleStats simulate_noninertial(const ParticleSpec& spec, const Environment& env,
                                   const CorrelationKernel& kernel, const InitialCondition& init,
                                   const SimulationConfig& cfg);

// Ordinary least-squares slope of log(MSD) vs log(t) over the record times
// inside [t_lo, t_hi], with its standard error.  MSD is m2_x.  Requires at
// least 5 points in the window, all with positive time and MSD.
struct ExponentEstimate {
    double lambda_hat = 0.0;
    double se = 0.0;
};
ExponentEstimate estimate_msd_exponent(const EnsembleStats& stats, double t_lo, double t_hi);

}  // namespace bmx
