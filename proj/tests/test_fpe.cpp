#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "bmx/analytic.hpp"
#include "bmx/errors.hpp"
#include "bmx/fpe.hpp"

using namespace bmx;

namespace {

const ParticleSpec kFree(1.0, 1.0);
const Environment kUnitEnv = NonThermal(1.0);
const CorrelationKernel kKernel(0.5);

// discrete L2 distance between a grid density and a reference pdf
template <typename Pdf>
double l2_distance(const Grid1D& grid, const std::vector<double>& values, const Pdf& pdf) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double diff = values[i] - pdf(grid.center(i));
        sum += diff * diff;
    }
    return std::sqrt(sum * grid.dy());
}

}  // namespace

TEST_CASE("grid construction is validated") {
    CHECK_THROWS_AS(Grid1D(1.0, 1.0, 128), config_error);
    CHECK_THROWS_AS(Grid1D(1.0, -1.0, 128), config_error);
    CHECK_THROWS_AS(Grid1D(-1.0, 1.0, 32), config_error);
    const Grid1D grid(-8.0, 8.0, 512);
    CHECK(grid.dy() == doctest::Approx(0.03125).epsilon(1e-15));
    CHECK(grid.center(0) == doctest::Approx(-8.0 + 0.015625).epsilon(1e-12));
}

TEST_CASE("momentum relaxation tracks the closed-form second moment") {
    // the delta regularisation adds a grid-dependent offset that decays with
    // the same rate as the analytic moment, so the reference is exact
    const Grid1D grid(-8.0, 8.0, 512);
    const std::vector<DensitySnapshot> snaps =
        solve_rayleigh(kFree, kUnitEnv, kKernel, grid, 0.01, 2.0, {0.5, 2.0});
    REQUIRE(snaps.size() == 2);
    for (const DensitySnapshot& snap : snaps) {
        const double want =
            classical_inertial_free_msp(kFree, SharpOrigin{}, kUnitEnv, kKernel, snap.t) +
            snap.initial_variance * std::exp(-4.0 * snap.t);
        CHECK(std::fabs(snap.variance - want) / want < 0.01);
        CHECK(std::fabs(snap.norm - 1.0) < 1e-8);
        CHECK(std::fabs(snap.mean) < 1e-10);
        CHECK(snap.clipped_mass < 1e-8);
    }
}

TEST_CASE("momentum relaxation reaches the Maxwell distribution") {
    const Grid1D grid(-8.0, 8.0, 1024);
    const std::vector<DensitySnapshot> snaps =
        solve_rayleigh(kFree, kUnitEnv, kKernel, grid, 0.01, 4.0, {4.0});
    // stationary distribution: zero-mean Gaussian with variance m*E = 1
    const double var = 1.0;
    const auto maxwell = [&](double p) {
        return std::exp(-p * p / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
    };
    CHECK(l2_distance(grid, snaps[0].values, maxwell) < 1e-3);
}

TEST_CASE("momentum relaxation converges at second order in the cell width") {
    // the substep control ties the time step to dy^2, so halving the cell
    // width should cut the moment error by about four
    const double t_end = 1.0;
    double err[2];
    std::size_t cells[2] = {256, 512};
    for (int r = 0; r < 2; ++r) {
        const Grid1D grid(-8.0, 8.0, cells[r]);
        const std::vector<DensitySnapshot> snaps =
            solve_rayleigh(kFree, kUnitEnv, kKernel, grid, 1e-3, t_end, {t_end});
        const DensitySnapshot& snap = snaps[0];
        const double want =
            classical_inertial_free_msp(kFree, SharpOrigin{}, kUnitEnv, kKernel, snap.t) +
            snap.initial_variance * std::exp(-4.0 * snap.t);
        err[r] = std::fabs(snap.variance - want);
    }
    const double ratio = err[0] / err[1];
    CHECK(ratio > 3.4);
    CHECK(ratio < 4.6);
}

TEST_CASE("free overdamped density spreads with the kernel integral") {
    const Grid1D grid(-9.0, 9.0, 512);
    const std::vector<DensitySnapshot> snaps =
        solve_smoluchowski(kFree, kUnitEnv, kKernel, grid, 0.01, 1.0, {0.25, 1.0});
    for (const DensitySnapshot& snap : snaps) {
        const double want =
            snap.initial_variance + 2.0 * kKernel.intensity_integral(snap.t);
        CHECK(std::fabs(snap.variance - want) / want < 0.01);
        CHECK(std::fabs(snap.norm - 1.0) < 1e-8);
    }
}

TEST_CASE("harmonic overdamped density relaxes to equipartition") {
    const ParticleSpec osc(1.0, 1.0, HarmonicPotential(1.3));
    const double kappa = 2.0 * 1.3 * 1.3;  // 2 k / (gamma m)
    const Grid1D grid(-6.5, 6.5, 512);
    const std::vector<DensitySnapshot> snaps =
        solve_smoluchowski(osc, kUnitEnv, kKernel, grid, 0.01, 3.0, {0.5, 3.0});
    for (const DensitySnapshot& snap : snaps) {
        const OscillatorMoments mom =
            classical_noninertial_oscillator(osc, kUnitEnv, kKernel, snap.t);
        const double want = snap.initial_variance * std::exp(-kappa * snap.t) + 2.0 * mom.G;
        CHECK(std::fabs(snap.variance - want) / want < 0.01);
    }
    // the density stays Gaussian: compare the profile against the Gaussian
    // carrying the exact finite-time variance
    {
        const OscillatorMoments mom =
            classical_noninertial_oscillator(osc, kUnitEnv, kKernel, snaps[1].t);
        const double var =
            snaps[1].initial_variance * std::exp(-kappa * snaps[1].t) + 2.0 * mom.G;
        const auto gauss = [&](double x) {
            return std::exp(-x * x / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
        };
        CHECK(l2_distance(grid, snaps[1].values, gauss) < 1e-4);
    }
    // by t = 3 the variance has relaxed to within one percent of E/k
    CHECK(std::fabs(snaps[1].variance - 1.0 / 1.69) * 1.69 < 0.01);
}

TEST_CASE("a density reaching the boundary raises a validity error") {
    const Grid1D narrow(-2.5, 2.5, 128);
    CHECK_THROWS_AS(solve_rayleigh(kFree, kUnitEnv, kKernel, narrow, 0.01, 2.0, {2.0}),
                    validity_error);
}

TEST_CASE("solver configuration is validated") {
    const Grid1D grid(-8.0, 8.0, 128);
    CHECK_THROWS_AS(solve_rayleigh(kFree, kUnitEnv, kKernel, grid, 0.0, 1.0, {1.0}),
                    config_error);
    CHECK_THROWS_AS(solve_rayleigh(kFree, kUnitEnv, kKernel, grid, 0.01, -1.0, {1.0}),
                    config_error);
    CHECK_THROWS_AS(solve_rayleigh(kFree, kUnitEnv, kKernel, grid, 0.01, 1.0, {}),
                    config_error);
    CHECK_THROWS_AS(solve_rayleigh(kFree, kUnitEnv, kKernel, grid, 0.01, 1.0, {2.0}),
                    config_error);
    CHECK_THROWS_AS(solve_rayleigh(kFree, kUnitEnv, kKernel, grid, 0.01, 1.0, {-0.5}),
                    config_error);
    // a grid far from the origin cannot seed the initial delta
    const Grid1D offset(20.0, 30.0, 128);
    CHECK_THROWS_AS(solve_rayleigh(kFree, kUnitEnv, kKernel, offset, 0.01, 1.0, {1.0}),
                    config_error);
    // momentum relaxation is free-particle physics
    const ParticleSpec osc(1.0, 1.0, HarmonicPotential(1.3));
    CHECK_THROWS_AS(solve_rayleigh(osc, kUnitEnv, kKernel, grid, 0.01, 1.0, {1.0}),
                    scenario_error);
    // overdamped solver needs damping
    const ParticleSpec undamped(1.0, 0.0);
    CHECK_THROWS_AS(solve_smoluchowski(undamped, kUnitEnv, kKernel, grid, 0.01, 1.0, {1.0}),
                    scenario_error);
}

TEST_CASE("snapshots come back in ascending time order") {
    const Grid1D grid(-8.0, 8.0, 128);
    const std::vector<DensitySnapshot> snaps =
        solve_rayleigh(kFree, kUnitEnv, kKernel, grid, 0.01, 1.0, {1.0, 0.25, 0.5});
    REQUIRE(snaps.size() == 3);
    CHECK(snaps[0].t < snaps[1].t);
    CHECK(snaps[1].t < snaps[2].t);
    CHECK(snaps[0].t == doctest::Approx(0.25).epsilon(0.05));
}
