#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "bmx/analytic.hpp"
#include "bmx/constants.hpp"
#include "bmx/errors.hpp"

using namespace bmx;

namespace {

constexpr double kHbar = PhysicalConstants::hbar;
constexpr double kBoltz = PhysicalConstants::k_B;

// Composite Simpson quadrature used as an independent check of the closed
// forms; fine enough that its own error is far below the test tolerances.
template <typename F>
double simpson(const F& f, double a, double b, int n_pairs = 4000) {
    const double h = (b - a) / (2.0 * n_pairs);
    double sum = f(a) + f(b);
    for (int i = 1; i < 2 * n_pairs; ++i) {
        sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

// Unit-scale fixtures shared by most cases: m = gamma = E = 1, t_c = 0.5.
const ParticleSpec kFree(1.0, 1.0);
const Environment kUnitEnv = NonThermal(1.0);

double central_diff(const std::vector<double>& f, double h) {
    return (f[1] - f[0]) / (2.0 * h);
}

}  // namespace

// --------------------------------------------------------------- particle

TEST_CASE("particle spec validates mass, damping and potential") {
    CHECK_THROWS_AS(ParticleSpec(0.0, 1.0), scenario_error);
    CHECK_THROWS_AS(ParticleSpec(-1.0, 1.0), scenario_error);
    CHECK_THROWS_AS(ParticleSpec(1.0, -1e-9), scenario_error);
    CHECK_THROWS_AS(HarmonicPotential(0.0), scenario_error);
    CHECK_THROWS_AS(HarmonicPotential(-2.0), scenario_error);
    CHECK_NOTHROW(ParticleSpec(1.0, 0.0));

    const ParticleSpec osc(2.0, 1.0, HarmonicPotential(3.0));
    CHECK(!osc.is_free());
    CHECK(osc.omega() == 3.0);
    CHECK(osc.stiffness() == doctest::Approx(2.0 * 9.0).epsilon(1e-15));
    CHECK(kFree.is_free());
    CHECK_THROWS_AS(kFree.omega(), scenario_error);
    CHECK_THROWS_AS(kFree.stiffness(), scenario_error);
}

TEST_CASE("initial conditions expose their second moments") {
    CHECK(initial_x2(SharpOrigin{}, 1.0) == 0.0);
    CHECK(initial_p2(SharpOrigin{}, 1.0) == 0.0);

    CHECK_THROWS_AS(MomentumVariance(-1.0), scenario_error);
    CHECK(initial_x2(MomentumVariance(2.5), 1.0) == 0.0);
    CHECK(initial_p2(MomentumVariance(2.5), 1.0) == 2.5);

    CHECK_THROWS_AS(MinimalGaussian(0.0), scenario_error);
    CHECK_THROWS_AS(MinimalGaussian(-1.0), scenario_error);
    const MinimalGaussian g(0.7);
    const double m = 1.3;
    CHECK(initial_x2(g, m) == doctest::Approx(0.7 * kHbar / (2.0 * m)).epsilon(1e-15));
    CHECK(initial_p2(g, m) == doctest::Approx(kHbar * m / (2.0 * 0.7)).epsilon(1e-15));
    // minimal-uncertainty product
    CHECK(initial_x2(g, m) * initial_p2(g, m) ==
          doctest::Approx(kHbar * kHbar / 4.0).epsilon(1e-15));
}

// --------------------------------------------- classical inertial momentum

TEST_CASE("free momentum relaxation matches quadrature of its defining integral") {
    const CorrelationKernel kernel(0.5);
    for (double p2_0 : {0.0, 0.4, 1.0, 2.5}) {
        const InitialCondition init = MomentumVariance(p2_0);
        CHECK(classical_inertial_free_msp(kFree, init, kUnitEnv, kernel, 0.0) == p2_0);
        for (double t : {0.05, 0.7, 2.3}) {
            const double want =
                p2_0 * std::exp(-4.0 * t) +
                4.0 * simpson([&](double s) { return std::exp(-4.0 * (t - s)) *
                                                     kernel.intensity(s); },
                              0.0, t);
            const double got = classical_inertial_free_msp(kFree, init, kUnitEnv, kernel, t);
            CHECK(got == doctest::Approx(want).epsilon(1e-10));
        }
    }
    // long-time limit: equipartition value m*E
    const double late =
        classical_inertial_free_msp(kFree, SharpOrigin{}, kUnitEnv, kernel, 20.0);
    CHECK(late == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("momentum relaxation is continuous across the degenerate rate crossing") {
    // 4*gamma*t_c = 1 makes the two relaxation rates coincide; the closed form
    // must pass smoothly through that point instead of dividing by zero.
    const double t_c_eq = 0.25;  // gamma = 1
    const double t = 0.9;
    const double at = classical_inertial_free_msp(kFree, SharpOrigin{}, kUnitEnv,
                                                  CorrelationKernel(t_c_eq), t);
    const double below = classical_inertial_free_msp(
        kFree, SharpOrigin{}, kUnitEnv, CorrelationKernel(t_c_eq * (1.0 - 1e-9)), t);
    const double above = classical_inertial_free_msp(
        kFree, SharpOrigin{}, kUnitEnv, CorrelationKernel(t_c_eq * (1.0 + 1e-9)), t);
    CHECK(std::isfinite(at));
    CHECK(below == doctest::Approx(at).epsilon(1e-7));
    CHECK(above == doctest::Approx(at).epsilon(1e-7));
}

TEST_CASE("thermal force reproduces the laboratory-scale magnitudes") {
    // 1 g particle in a room-temperature bath with 1/ps memory: the repulsive
    // short-time force from a sharp start is of order 1 N, the attractive one
    // from an equilibrated start is about -3.5 N.
    const ParticleSpec spec(1e-3, 1e12);
    const Environment env = ClassicalThermal(300.0);
    const CorrelationKernel kernel(1e-12);

    const double repulsive =
        classical_inertial_free_force(spec, SharpOrigin{}, env, kernel, 0.0);
    CHECK(repulsive == doctest::Approx(2.8781754637269772).epsilon(1e-12));
    CHECK(repulsive > 0.5);
    CHECK(repulsive < 5.0);
    // the short-time limit is sqrt(2*gamma*m*E/t_c)
    const double energy = kBoltz * 300.0;
    CHECK(repulsive ==
          doctest::Approx(std::sqrt(2.0 * 1e12 * 1e-3 * energy / 1e-12)).epsilon(1e-14));

    const InitialCondition equil = MomentumVariance(1e-3 * energy);
    const double attractive = classical_inertial_free_force(spec, equil, env, kernel, 0.0);
    CHECK(attractive == doctest::Approx(-4.0703547756921632).epsilon(1e-12));
    CHECK(attractive == doctest::Approx(-2.0 * 1e12 * std::sqrt(1e-3 * energy)).epsilon(1e-14));
    CHECK(std::fabs(attractive - (-3.5)) / 3.5 < 0.2);
}

TEST_CASE("thermal force is the derivative of the RMS momentum") {
    const CorrelationKernel kernel(0.5);
    const InitialCondition init = MomentumVariance(0.4);
    const double h = 1e-5;
    for (double t : {0.2, 0.9, 3.1}) {
        const std::vector<double> p = {
            std::sqrt(classical_inertial_free_msp(kFree, init, kUnitEnv, kernel, t - h)),
            std::sqrt(classical_inertial_free_msp(kFree, init, kUnitEnv, kernel, t + h))};
        const double force = classical_inertial_free_force(kFree, init, kUnitEnv, kernel, t);
        CHECK(force == doctest::Approx(central_diff(p, h)).epsilon(1e-6));
    }
}

// ------------------------------------------------- classical displacement

TEST_CASE("free displacement moments match the momentum-correlation oracle") {
    // Frozen 30-digit quadrature of the underlying double integral
    // (momentum correlation route) at t = 0.8 with unit parameters.
    const CorrelationKernel kernel(0.5);
    const Observables obs = classical_inertial_free_rmsd(kFree, kUnitEnv, kernel, 0.8);
    CHECK((*obs.X) * (*obs.X) == doctest::Approx(0.2443637897779594654).epsilon(1e-12));
    CHECK(*obs.D == doctest::Approx(0.2371516262275128355).epsilon(1e-12));
    CHECK(*obs.V == doctest::Approx(*obs.D / *obs.X).epsilon(1e-15));
}

TEST_CASE("free displacement starts ballistically at the thermal velocity") {
    const CorrelationKernel kernel(0.5);
    const Observables at0 = classical_inertial_free_rmsd(kFree, kUnitEnv, kernel, 0.0);
    CHECK(*at0.X == 0.0);
    CHECK(*at0.D == 0.0);
    CHECK(*at0.V == doctest::Approx(std::sqrt(1.0)).epsilon(1e-15));  // sqrt(E/m)
}

TEST_CASE("overdamped free moments follow the kernel integrals") {
    const CorrelationKernel kernel(0.5);
    for (double t : {0.1, 0.9, 4.0}) {
        const Observables obs = classical_noninertial_free(kFree, kUnitEnv, kernel, t);
        const double x2_want = 2.0 * simpson([&](double s) { return kernel.intensity(s); },
                                             0.0, t);
        CHECK((*obs.X) * (*obs.X) == doctest::Approx(x2_want).epsilon(1e-10));
        CHECK(*obs.D == doctest::Approx(kernel.intensity(t)).epsilon(1e-14));
        CHECK(*obs.V == doctest::Approx(*obs.D / *obs.X).epsilon(1e-15));
    }
    const Observables at0 = classical_noninertial_free(kFree, kUnitEnv, kernel, 0.0);
    CHECK(*at0.X == 0.0);
    CHECK(*at0.D == 0.0);
    CHECK(*at0.V == doctest::Approx(std::sqrt(1.0 / 0.5)).epsilon(1e-15));  // sqrt(E/gamma m t_c)
}

TEST_CASE("overdamped oscillator relaxes to energy equipartition") {
    const ParticleSpec osc(1.0, 1.0, HarmonicPotential(1.3));
    const CorrelationKernel kernel(0.5);
    const double tau = 1.0 / (2.0 * 1.3 * 1.3);

    for (double t : {0.2, 1.1, 3.0}) {
        const OscillatorMoments mom = classical_noninertial_oscillator(osc, kUnitEnv, kernel, t);
        const double x2_want = 2.0 * simpson([&](double s) { return std::exp(-(t - s) / tau) *
                                                                    kernel.intensity(s); },
                                             0.0, t);
        CHECK((*mom.obs.X) * (*mom.obs.X) == doctest::Approx(x2_want).epsilon(1e-10));
        CHECK((*mom.obs.X) * (*mom.obs.X) == doctest::Approx(2.0 * mom.G).epsilon(1e-15));
        CHECK(*mom.obs.meanE == doctest::Approx(1.3 * 1.3 * mom.G).epsilon(1e-15));
        CHECK(*mom.obs.V == doctest::Approx(*mom.obs.D / *mom.obs.X).epsilon(1e-15));
    }

    const OscillatorMoments at0 = classical_noninertial_oscillator(osc, kUnitEnv, kernel, 0.0);
    CHECK(*at0.obs.meanE == 0.0);
    CHECK(*at0.obs.V == doctest::Approx(std::sqrt(1.0 / 0.5)).epsilon(1e-15));

    const OscillatorMoments late =
        classical_noninertial_oscillator(osc, kUnitEnv, kernel, 40.0 * tau);
    CHECK(*late.obs.meanE == doctest::Approx(0.5).epsilon(1e-8));  // E/2
}

// ----------------------------------------------------- anomalous diffusion

TEST_CASE("anomalous moments match 30-digit quadrature of the defining integrals") {
    // Frozen from independent quadrature of the Langevin solutions (momentum
    // correlation route for the inertial case, intensity-weighted single
    // integrals otherwise) with m = gamma = E = 1, t_c = 0.5, omega = 1.3.
    struct Row {
        AnomalousScenario scenario;
        double lambda, t, want;
    };
    const Row rows[] = {
        {AnomalousScenario::ConfigInertial, 2, 0.3, 0.061965186449527783118},
        {AnomalousScenario::ConfigInertial, 2, 1.7, 3.1942445442855031533},
        {AnomalousScenario::ConfigInertial, 3, 0.3, 0.057211892756612933743},
        {AnomalousScenario::ConfigInertial, 3, 1.7, 6.8975345945007087873},
        {AnomalousScenario::ConfigInertial, 4, 0.3, 0.055506298337047313615},
        {AnomalousScenario::ConfigInertial, 4, 1.7, 17.065389492732251806},
        {AnomalousScenario::MomentumSpace, 2, 0.7, 2.4284261973672229761},
        {AnomalousScenario::MomentumSpace, 3, 0.7, 3.6564010408041780636},
        {AnomalousScenario::MomentumSpace, 4, 0.7, 5.3660463226176589061},
        {AnomalousScenario::NonInertialFree, 2, 0.7, 2.6065969639416064769},
        {AnomalousScenario::NonInertialFree, 3, 0.7, 3.3905969639416064769},
        {AnomalousScenario::NonInertialFree, 4, 0.7, 4.4881969639416064769},
        {AnomalousScenario::NonInertialOscillator, 2, 0.7, 1.3370875574372446744},
        {AnomalousScenario::NonInertialOscillator, 3, 0.7, 1.979421730284303685},
        {AnomalousScenario::NonInertialOscillator, 4, 0.7, 2.8695941567614743856},
    };
    const ParticleSpec osc(1.0, 1.0, HarmonicPotential(1.3));
    for (const Row& row : rows) {
        const CorrelationKernel kernel(0.5, row.lambda);
        const ParticleSpec& spec =
            row.scenario == AnomalousScenario::NonInertialOscillator ? osc : kFree;
        const double got = anomalous_msd(row.scenario, row.lambda, spec, kUnitEnv, kernel, row.t);
        CHECK(got == doctest::Approx(row.want).epsilon(1e-12));
    }
}

TEST_CASE("non-integer exponents are closed form only for the free overdamped case") {
    const CorrelationKernel kernel(0.5, 2.6);
    const double t = 1.3;
    const double got =
        anomalous_msd(AnomalousScenario::NonInertialFree, 2.6, kFree, kUnitEnv, kernel, t);
    const double want = 2.0 * simpson([&](double s) { return kernel.intensity(s); }, 0.0, t);
    CHECK(got == doctest::Approx(want).epsilon(1e-10));

    CHECK_THROWS_AS(
        anomalous_msd(AnomalousScenario::MomentumSpace, 2.6, kFree, kUnitEnv, kernel, t),
        scenario_error);
    CHECK_THROWS_AS(
        anomalous_msd(AnomalousScenario::ConfigInertial, 2.6, kFree, kUnitEnv, kernel, t),
        scenario_error);
}

TEST_CASE("anomalous moments validate their inputs") {
    const CorrelationKernel k2(0.5, 2.0);
    const CorrelationKernel k3(0.5, 3.0);
    // kernel exponent must agree with the requested lambda
    CHECK_THROWS_AS(anomalous_msd(AnomalousScenario::MomentumSpace, 2.0, kFree, kUnitEnv, k3, 1.0),
                    scenario_error);
    // negative time
    CHECK_THROWS_AS(anomalous_msd(AnomalousScenario::MomentumSpace, 2.0, kFree, kUnitEnv, k2, -1.0),
                    scenario_error);
    // oscillator scenario needs a harmonic potential and vice versa
    CHECK_THROWS_AS(
        anomalous_msd(AnomalousScenario::NonInertialOscillator, 2.0, kFree, kUnitEnv, k2, 1.0),
        scenario_error);
    const ParticleSpec osc(1.0, 1.0, HarmonicPotential(1.3));
    CHECK_THROWS_AS(anomalous_msd(AnomalousScenario::NonInertialFree, 2.0, osc, kUnitEnv, k2, 1.0),
                    scenario_error);
}

// ------------------------------------------------------- quantum momentum

TEST_CASE("quantum momentum relaxation keeps the minimal Heisenberg product") {
    const CorrelationKernel kernel(0.5);
    const MinimalGaussian init(0.3 * kHbar);  // width != hbar/2E on purpose
    for (double t : {0.0, 0.01, 0.4, 2.0, 9.0}) {
        const QuantumFpFree q = quantum_fp_free(kFree, init, kUnitEnv, kernel, t);
        CHECK(q.state.sigma_x * q.state.sigma_p ==
              doctest::Approx(kHbar / 2.0).epsilon(1e-14));
        CHECK(q.state.sigma_p * q.state.sigma_p ==
              doctest::Approx(2.0 * q.A).epsilon(1e-14));
    }
}

TEST_CASE("quantum momentum relaxation has the pinned endpoints") {
    const CorrelationKernel kernel(0.5);
    const MinimalGaussian init(kHbar / 2.0);  // a = hbar/2E with E = 1
    const QuantumFpFree at0 = quantum_fp_free(kFree, init, kUnitEnv, kernel, 0.0);
    CHECK(at0.state.sigma_p == doctest::Approx(std::sqrt(kHbar / (2.0 * init.a))).epsilon(1e-14));
    CHECK(*at0.obs.F == doctest::Approx(-std::sqrt(2.0 * kHbar / init.a)).epsilon(1e-14));

    const QuantumFpFree late = quantum_fp_free(kFree, init, kUnitEnv, kernel, 25.0);
    CHECK(late.state.sigma_p == doctest::Approx(1.0).epsilon(1e-12));           // sqrt(mE)
    CHECK(late.state.sigma_x == doctest::Approx(kHbar / 2.0).epsilon(1e-12));   // hbar/sqrt(4mE)
}

TEST_CASE("quantum diffusion validity flag follows the relaxation kernel sign") {
    const CorrelationKernel kernel(0.5);
    const MinimalGaussian init(kHbar / 2.0);
    CHECK(quantum_fp_free(kFree, init, kUnitEnv, kernel, 0.1).d_valid);
    // with 4*gamma*t_c = 2 the fast mode dies first and the kernel turns
    // negative at late times
    CHECK(!quantum_fp_free(kFree, init, kUnitEnv, kernel, 5.0).d_valid);
}

TEST_CASE("momentum-route and Langevin-route spreads coincide at the closure width") {
    // The two derivations describe the same state when the initial width is
    // a = hbar/2E; their RMS momenta must agree at every time.
    const CorrelationKernel kernel(0.5);
    const MinimalGaussian init(kHbar / 2.0);
    for (int i = 0; i < 50; ++i) {
        const double t = std::pow(10.0, -2.0 + 4.0 * i / 49.0);
        const QuantumFpFree fp = quantum_fp_free(kFree, init, kUnitEnv, kernel, t);
        const QuantumLangevinFree ql = quantum_langevin_free(kFree, kUnitEnv, kernel, t);
        CHECK(fp.state.sigma_p == doctest::Approx(ql.state.sigma_p).epsilon(1e-12));
    }
}

// ------------------------------------------------- closed quantum relaxation

TEST_CASE("closed-form quantum relaxation depends only on the quantum time") {
    const double t_q = kHbar / 2.0;  // E = 1
    const Observables at0 = quantum_fp_free_closed(kFree, kUnitEnv, 0.0);
    CHECK(*at0.D == kHbar / 2.0);                                   // exactly hbar/2m
    CHECK(*at0.V == doctest::Approx(1.0).epsilon(1e-15));           // sqrt(E/m)
    CHECK(*at0.P == doctest::Approx(1.0).epsilon(1e-15));           // sqrt(mE)
    CHECK(*at0.F == doctest::Approx(-2.0 / kHbar).epsilon(1e-14));  // -2 sqrt(mE^3)/hbar

    const Observables cross = quantum_fp_free_closed(kFree, kUnitEnv, t_q * std::log(2.0));
    CHECK(std::fabs(*cross.F) <= 1e-12 * std::fabs(*at0.F));
    REQUIRE(cross.D.has_value());
    CHECK(std::fabs(*cross.D) <= 1e-12 * (*at0.D));
    // the diffusion coefficient is reported only up to its zero crossing
    CHECK(!quantum_fp_free_closed(kFree, kUnitEnv, t_q * std::log(2.0) * 1.001).D.has_value());
    CHECK(quantum_fp_free_closed(kFree, kUnitEnv, t_q * std::log(2.0) * 1.001).V.has_value());

    const Observables v1 = quantum_fp_free_closed(kFree, kUnitEnv, t_q);
    const Observables v10 = quantum_fp_free_closed(kFree, kUnitEnv, 10.0 * t_q);
    CHECK(std::fabs(*v1.V / *at0.V) == doctest::Approx(0.24847505145444427).epsilon(1e-12));
    CHECK(std::fabs(*v1.V / *at0.V) > 0.2);
    CHECK(std::fabs(*v1.V / *at0.V) < 0.3);
    // parameter-free constant, pinned as a regression value (~ e^-10)
    CHECK(std::fabs(*v10.V / *at0.V) == doctest::Approx(4.5401990775715329e-5).epsilon(1e-12));

    const Observables late = quantum_fp_free_closed(kFree, kUnitEnv, 40.0 * t_q);
    CHECK(*late.P == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed-form diffusion scale for a femtogram particle") {
    const ParticleSpec spec(1e-15, 1.0);
    const Observables at0 = quantum_fp_free_closed(spec, kUnitEnv, 0.0);
    CHECK(*at0.D == doctest::Approx(5.272859085e-20).epsilon(1e-9));
    CHECK(std::fabs(*at0.D - 5.27e-20) / 5.27e-20 < 0.01);
}

// --------------------------------------------------------- quantum Langevin

TEST_CASE("Langevin spreads decompose into the classical moments") {
    // sigma_p^2 equals the classical relaxation from momentum equilibrium,
    // sigma_x^2 is the classical spread plus the initial quantum width, and
    // D is the classical diffusion coefficient.
    const CorrelationKernel kernel(0.5);
    for (double t : {0.0, 0.3, 1.7, 6.0}) {
        const QuantumLangevinFree ql = quantum_langevin_free(kFree, kUnitEnv, kernel, t);
        const double msp =
            classical_inertial_free_msp(kFree, MomentumVariance(1.0), kUnitEnv, kernel, t);
        CHECK(ql.state.sigma_p * ql.state.sigma_p == doctest::Approx(msp).epsilon(1e-13));

        const Observables rm = classical_inertial_free_rmsd(kFree, kUnitEnv, kernel, t);
        const double x2_want = kHbar * kHbar / 4.0 + (*rm.X) * (*rm.X);
        CHECK(ql.state.sigma_x * ql.state.sigma_x == doctest::Approx(x2_want).epsilon(1e-13));
        CHECK(*ql.obs.D == doctest::Approx(*rm.D).epsilon(1e-14));
        CHECK(*ql.obs.V == doctest::Approx(*ql.obs.D / ql.state.sigma_x).epsilon(1e-15));
    }
}

TEST_CASE("Langevin uncertainty product is minimal only at the start") {
    const CorrelationKernel kernel(0.5);
    const QuantumLangevinFree at0 = quantum_langevin_free(kFree, kUnitEnv, kernel, 0.0);
    CHECK(at0.state.sigma_x * at0.state.sigma_p ==
          doctest::Approx(kHbar / 2.0).epsilon(1e-14));
    CHECK(*at0.state.cov_xp == 0.0);
    for (double t : {0.1, 1.0, 8.0}) {
        const QuantumLangevinFree ql = quantum_langevin_free(kFree, kUnitEnv, kernel, t);
        CHECK(ql.state.sigma_x * ql.state.sigma_p > kHbar / 2.0);
    }
}

TEST_CASE("Langevin covariance saturates at its stationary value") {
    const CorrelationKernel kernel(0.5);
    const QuantumLangevinFree late = quantum_langevin_free(kFree, kUnitEnv, kernel, 30.0);
    CHECK(*late.state.cov_xp == doctest::Approx(1.5).epsilon(1e-10));  // (3/2) E/gamma
}

// --------------------------------------------------- overdamped quantum

TEST_CASE("overdamped quantum free particle keeps the Heisenberg product exactly") {
    const CorrelationKernel kernel(0.5);
    const MinimalGaussian init(kHbar / 2.0);
    for (int i = 0; i < 100; ++i) {
        const double t = std::pow(10.0, -3.0 + 6.0 * i / 99.0);
        const QuantumSmoluchowskiFree q =
            quantum_smoluchowski_free(kFree, init, kUnitEnv, kernel, t);
        CHECK(std::fabs(q.state.sigma_x * q.state.sigma_p - kHbar / 2.0) / (kHbar / 2.0) <
              1e-12);
        CHECK(*q.obs.F <= 0.0);
    }
}

TEST_CASE("overdamped quantum moments extend the classical kernel integrals") {
    const CorrelationKernel kernel(0.5);
    const MinimalGaussian init(0.8 * kHbar);
    for (double t : {0.2, 1.1, 4.0}) {
        const QuantumSmoluchowskiFree q =
            quantum_smoluchowski_free(kFree, init, kUnitEnv, kernel, t);
        CHECK(q.b == doctest::Approx(kHbar * init.a / 4.0 + kernel.intensity_integral(t))
                         .epsilon(1e-14));
        CHECK(*q.obs.D == doctest::Approx(kernel.intensity(t)).epsilon(1e-14));
        CHECK(*q.obs.V == doctest::Approx(*q.obs.D / *q.obs.X).epsilon(1e-15));
    }
}

TEST_CASE("narrow initial spread recovers the classical overdamped displacement") {
    // shrinking the quantum width parameter by 1e-6 pushes the quantum
    // displacement onto the classical one at the memory time
    const CorrelationKernel kernel(0.5);
    const MinimalGaussian narrow(1e-6 / kHbar);
    const QuantumSmoluchowskiFree q =
        quantum_smoluchowski_free(kFree, narrow, kUnitEnv, kernel, 0.5);
    const Observables cl = classical_noninertial_free(kFree, kUnitEnv, kernel, 0.5);
    CHECK(*q.obs.X > *cl.X);
    CHECK(std::fabs(*q.obs.X - *cl.X) / *cl.X < 1e-6);
}

TEST_CASE("overdamped quantum force is the derivative of the RMS momentum") {
    const CorrelationKernel kernel(0.5);
    const MinimalGaussian init(kHbar / 2.0);
    const double h = 1e-5;
    for (double t : {0.3, 1.4}) {
        const std::vector<double> p = {
            quantum_smoluchowski_free(kFree, init, kUnitEnv, kernel, t - h).state.sigma_p,
            quantum_smoluchowski_free(kFree, init, kUnitEnv, kernel, t + h).state.sigma_p};
        const QuantumSmoluchowskiFree q =
            quantum_smoluchowski_free(kFree, init, kUnitEnv, kernel, t);
        CHECK(*q.obs.F == doctest::Approx(central_diff(p, h)).epsilon(1e-6));
    }
}

TEST_CASE("overdamped quantum oscillator squeezes before relaxing") {
    const ParticleSpec osc(1.0, 1.0, HarmonicPotential(1.3));
    const double k = 1.3 * 1.3;  // stiffness, m = 1
    const CorrelationKernel kernel(0.5);
    const MinimalGaussian init(kHbar / 2.0);

    const QuantumSmoluchowskiOscillator at0 =
        quantum_smoluchowski_oscillator(osc, init, kUnitEnv, kernel, 0.0);
    CHECK(*at0.obs.D == doctest::Approx(-kHbar * init.a * k / 2.0).epsilon(1e-14));
    CHECK(*at0.obs.D < 0.0);

    const double kappa = 2.0 * k / 1.0;  // 2k/(gamma m)
    for (double t : {0.15, 0.8, 2.5}) {
        const QuantumSmoluchowskiOscillator q =
            quantum_smoluchowski_oscillator(osc, init, kUnitEnv, kernel, t);
        CHECK(std::fabs(q.state.sigma_x * q.state.sigma_p - kHbar / 2.0) / (kHbar / 2.0) <
              1e-12);
        // ODE solution: <X^2> = e^{-kappa t} <X^2(0)> + 2 int e^{-kappa(t-s)} I(s) ds
        const double x2_want =
            std::exp(-kappa * t) * (init.a * kHbar / 2.0) +
            2.0 * simpson([&](double s) { return std::exp(-kappa * (t - s)) *
                                                 kernel.intensity(s); },
                          0.0, t);
        CHECK(q.B / 2.0 == doctest::Approx(x2_want).epsilon(1e-10));
    }

    // squeezing: the negative initial momentum diffusion contracts the width
    // before the noise takes over; a wide initial Gaussian makes the dip
    // resolvable in double precision
    const MinimalGaussian wide(1e30);
    const QuantumSmoluchowskiOscillator w0 =
        quantum_smoluchowski_oscillator(osc, wide, kUnitEnv, kernel, 0.0);
    const QuantumSmoluchowskiOscillator dip =
        quantum_smoluchowski_oscillator(osc, wide, kUnitEnv, kernel, 1e-5);
    CHECK(dip.state.sigma_x < w0.state.sigma_x);
    CHECK(dip.state.sigma_p > w0.state.sigma_p);

    // vanishing stiffness recovers the free evolution
    const ParticleSpec soft(1.0, 1.0, HarmonicPotential(1e-8));
    const QuantumSmoluchowskiOscillator qo =
        quantum_smoluchowski_oscillator(soft, init, kUnitEnv, kernel, 0.7);
    const QuantumSmoluchowskiFree qf =
        quantum_smoluchowski_free(kFree, init, kUnitEnv, kernel, 0.7);
    CHECK(qo.B == doctest::Approx(4.0 * qf.b).epsilon(1e-10));
}

TEST_CASE("overdamped quantum oscillator force tracks its RMS momentum derivative") {
    const ParticleSpec osc(1.0, 1.0, HarmonicPotential(1.3));
    const CorrelationKernel kernel(0.5);
    const MinimalGaussian init(kHbar / 2.0);
    const double h = 1e-5;
    for (double t : {0.3, 1.2}) {
        const std::vector<double> p = {
            quantum_smoluchowski_oscillator(osc, init, kUnitEnv, kernel, t - h).state.sigma_p,
            quantum_smoluchowski_oscillator(osc, init, kUnitEnv, kernel, t + h).state.sigma_p};
        const QuantumSmoluchowskiOscillator q =
            quantum_smoluchowski_oscillator(osc, init, kUnitEnv, kernel, t);
        CHECK(*q.obs.F == doctest::Approx(central_diff(p, h)).epsilon(1e-6));
    }
}

// --------------------------------------------- anomalous quantum asymptotics

TEST_CASE("anomalous quantum asymptotics pin the conjugate moment") {
    for (double lambda : {2.0, 3.0, 4.0}) {
        for (double t : {5.0, 40.0}) {
            const AnomalousAsymptotics inertial = quantum_anomalous_asymptotics(
                QuantumAnomalousScenario::Inertial, lambda, kFree, kUnitEnv, 0.5, t);
            CHECK(inertial.p2 ==
                  doctest::Approx(lambda * std::pow(t / 0.5, lambda - 1.0)).epsilon(1e-14));
            CHECK(inertial.p2 * inertial.x2 ==
                  doctest::Approx(kHbar * kHbar / 4.0).epsilon(1e-14));

            const AnomalousAsymptotics overdamped = quantum_anomalous_asymptotics(
                QuantumAnomalousScenario::NonInertial, lambda, kFree, kUnitEnv, 0.5, t);
            CHECK(overdamped.x2 ==
                  doctest::Approx(2.0 * std::pow(t, lambda) / std::pow(0.5, lambda - 1.0))
                      .epsilon(1e-14));
            CHECK(overdamped.p2 * overdamped.x2 ==
                  doctest::Approx(kHbar * kHbar / 4.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("anomalous quantum asymptotics approach the full anomalous moments") {
    // at long times the closed-form momentum moment converges onto the
    // asymptotic law
    const double lambda = 3.0;
    const CorrelationKernel kernel(0.5, lambda);
    const double t = 50.0;
    const double full =
        anomalous_msd(AnomalousScenario::MomentumSpace, lambda, kFree, kUnitEnv, kernel, t);
    const AnomalousAsymptotics asym = quantum_anomalous_asymptotics(
        QuantumAnomalousScenario::Inertial, lambda, kFree, kUnitEnv, 0.5, t);
    CHECK(full / asym.p2 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("anomalous quantum asymptotics validate their inputs") {
    CHECK_THROWS_AS(quantum_anomalous_asymptotics(QuantumAnomalousScenario::Inertial, 1.0, kFree,
                                                  kUnitEnv, 0.5, 1.0),
                    scenario_error);
    CHECK_THROWS_AS(quantum_anomalous_asymptotics(QuantumAnomalousScenario::Inertial, 2.0, kFree,
                                                  kUnitEnv, 0.5, 0.0),
                    scenario_error);
    CHECK_THROWS_AS(quantum_anomalous_asymptotics(QuantumAnomalousScenario::Inertial, 2.0, kFree,
                                                  kUnitEnv, -0.5, 1.0),
                    scenario_error);
    const Environment cold = NonThermal(1.0);
    const ParticleSpec osc(1.0, 1.0, HarmonicPotential(1.3));
    CHECK_THROWS_AS(quantum_anomalous_asymptotics(QuantumAnomalousScenario::Inertial, 2.0, osc,
                                                  cold, 0.5, 1.0),
                    scenario_error);
}

// --------------------------------------------------------------- guard rails

TEST_CASE("scenario preconditions are enforced") {
    const CorrelationKernel normal(0.5);
    const CorrelationKernel anomalous(0.5, 2.0);
    const ParticleSpec osc(1.0, 1.0, HarmonicPotential(1.3));
    const ParticleSpec undamped(1.0, 0.0);
    const MinimalGaussian init(kHbar / 2.0);

    // negative time
    CHECK_THROWS_AS(classical_inertial_free_msp(kFree, SharpOrigin{}, kUnitEnv, normal, -0.1),
                    scenario_error);
    // harmonic potential where only the free case is closed form
    CHECK_THROWS_AS(classical_inertial_free_msp(osc, SharpOrigin{}, kUnitEnv, normal, 1.0),
                    scenario_error);
    CHECK_THROWS_AS(classical_inertial_free_rmsd(osc, kUnitEnv, normal, 1.0), scenario_error);
    CHECK_THROWS_AS(quantum_fp_free(osc, init, kUnitEnv, normal, 1.0), scenario_error);
    CHECK_THROWS_AS(quantum_langevin_free(osc, kUnitEnv, normal, 1.0), scenario_error);
    CHECK_THROWS_AS(quantum_smoluchowski_free(osc, init, kUnitEnv, normal, 1.0), scenario_error);
    // free potential where the oscillator is required
    CHECK_THROWS_AS(classical_noninertial_oscillator(kFree, kUnitEnv, normal, 1.0),
                    scenario_error);
    CHECK_THROWS_AS(quantum_smoluchowski_oscillator(kFree, init, kUnitEnv, normal, 1.0),
                    scenario_error);
    // anomalous kernel where the normal one is required
    CHECK_THROWS_AS(classical_inertial_free_msp(kFree, SharpOrigin{}, kUnitEnv, anomalous, 1.0),
                    scenario_error);
    CHECK_THROWS_AS(quantum_langevin_free(kFree, kUnitEnv, anomalous, 1.0), scenario_error);
    // vanishing damping where relaxation rates divide by gamma
    CHECK_THROWS_AS(classical_noninertial_free(undamped, kUnitEnv, normal, 1.0), scenario_error);
    // non-positive diffusion energy where the quantum time scale needs it
    CHECK_THROWS_AS(quantum_langevin_free(kFree, NonThermal(0.0), normal, 1.0), scenario_error);
    CHECK_THROWS_AS(quantum_fp_free_closed(kFree, NonThermal(0.0), 1.0), scenario_error);
}

TEST_CASE("derivatives of the closed forms match central differences") {
    // velocity V = dX/dt and force F = dP/dt across representative scenarios
    const CorrelationKernel kernel(0.5);
    const ParticleSpec osc(1.0, 1.0, HarmonicPotential(1.3));
    const MinimalGaussian init(kHbar / 2.0);
    const double h = 1e-5;
    for (double t : {0.4, 1.6}) {
        {
            const std::vector<double> x = {
                *classical_inertial_free_rmsd(kFree, kUnitEnv, kernel, t - h).X,
                *classical_inertial_free_rmsd(kFree, kUnitEnv, kernel, t + h).X};
            CHECK(*classical_inertial_free_rmsd(kFree, kUnitEnv, kernel, t).V ==
                  doctest::Approx(central_diff(x, h)).epsilon(1e-6));
        }
        {
            const std::vector<double> x = {
                *classical_noninertial_free(kFree, kUnitEnv, kernel, t - h).X,
                *classical_noninertial_free(kFree, kUnitEnv, kernel, t + h).X};
            CHECK(*classical_noninertial_free(kFree, kUnitEnv, kernel, t).V ==
                  doctest::Approx(central_diff(x, h)).epsilon(1e-6));
        }
        {
            const std::vector<double> x = {
                *classical_noninertial_oscillator(osc, kUnitEnv, kernel, t - h).obs.X,
                *classical_noninertial_oscillator(osc, kUnitEnv, kernel, t + h).obs.X};
            CHECK(*classical_noninertial_oscillator(osc, kUnitEnv, kernel, t).obs.V ==
                  doctest::Approx(central_diff(x, h)).epsilon(1e-6));
        }
        {
            const std::vector<double> x = {
                quantum_smoluchowski_free(kFree, init, kUnitEnv, kernel, t - h).state.sigma_x,
                quantum_smoluchowski_free(kFree, init, kUnitEnv, kernel, t + h).state.sigma_x};
            CHECK(*quantum_smoluchowski_free(kFree, init, kUnitEnv, kernel, t).obs.V ==
                  doctest::Approx(central_diff(x, h)).epsilon(1e-6));
        }
        {
            const std::vector<double> p = {
                quantum_fp_free(kFree, init, kUnitEnv, kernel, t - h).state.sigma_p,
                quantum_fp_free(kFree, init, kUnitEnv, kernel, t + h).state.sigma_p};
            CHECK(*quantum_fp_free(kFree, init, kUnitEnv, kernel, t).obs.F ==
                  doctest::Approx(central_diff(p, h)).epsilon(1e-6));
        }
    }
}
