// Python bindings for the toolkit's main operations: particle/bath
// specification, memory kernels, closed-form moments, Langevin ensembles,
// Fokker-Planck densities and escape rates.  Container, optional and variant
// arguments convert by copy; library exceptions surface as bmx.ConfigError,
// bmx.ScenarioError and bmx.ValidityError.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bmx/analytic.hpp"
#include "bmx/constants.hpp"
#include "bmx/environment.hpp"
#include "bmx/errors.hpp"
#include "bmx/fpe.hpp"
#include "bmx/kernel.hpp"
#include "bmx/particle.hpp"
#include "bmx/rates.hpp"
#include "bmx/scenario.hpp"
#include "bmx/sde.hpp"

namespace py = pybind11;
using namespace bmx;

PYBIND11_MODULE(bmx, m) {
    m.doc() =
        "Non-Markovian Brownian motion toolkit: closed-form moments, Langevin "
        "ensembles, Fokker-Planck densities and escape rates (SI units throughout)";
    m.attr("__version__") = kToolVersion;
    m.attr("hbar") = PhysicalConstants::hbar;
    m.attr("k_B") = PhysicalConstants::k_B;

    py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<scenario_error>(m, "ScenarioError", PyExc_ValueError);
    py::register_exception<validity_error>(m, "ValidityError", PyExc_ArithmeticError);

    // ------------------------------------------------------------- particle
    py::class_<FreePotential>(m, "FreePotential", "No confining potential.")
        .def(py::init<>());
    py::class_<HarmonicPotential>(m, "HarmonicPotential",
                                  "Harmonic confinement of frequency omega (rad/s).")
        .def(py::init<double>(), py::arg("omega"))
        .def_readonly("omega", &HarmonicPotential::omega);

    py::class_<ParticleSpec>(m, "ParticleSpec",
                             "Mass (kg), damping rate gamma (1/s) and potential of the "
                             "tagged particle.  The inertial equations apply the "
                             "effective damping 2*gamma, the overdamped ones gamma.")
        .def(py::init<double, double>(), py::arg("mass"), py::arg("gamma"))
        .def(py::init<double, double, Potential>(), py::arg("mass"), py::arg("gamma"),
             py::arg("potential"))
        .def_readonly("mass", &ParticleSpec::mass)
        .def_readonly("gamma", &ParticleSpec::gamma)
        .def_readonly("potential", &ParticleSpec::potential)
        .def("is_free", &ParticleSpec::is_free)
        .def("omega", &ParticleSpec::omega)
        .def("stiffness", &ParticleSpec::stiffness);

    py::class_<SharpOrigin>(m, "SharpOrigin",
                            "Delta-function start: all initial moments zero.")
        .def(py::init<>());
    py::class_<MomentumVariance>(m, "MomentumVariance",
                                 "Prescribed <P^2(0)> in (kg m/s)^2, <X^2(0)> = 0.")
        .def(py::init<double>(), py::arg("p2_0"))
        .def_readonly("p2_0", &MomentumVariance::p2_0);
    py::class_<MinimalGaussian>(m, "MinimalGaussian",
                                "Minimal-uncertainty Gaussian of width parameter a (s): "
                                "<X^2(0)> = a*hbar/2m, <P^2(0)> = hbar*m/2a.")
        .def(py::init<double>(), py::arg("a"))
        .def_readonly("a", &MinimalGaussian::a);

    m.def("initial_x2", &initial_x2, py::arg("init"), py::arg("mass"),
          "Initial <X^2> implied by an initial condition, m^2.");
    m.def("initial_p2", &initial_p2, py::arg("init"), py::arg("mass"),
          "Initial <P^2> implied by an initial condition, (kg m/s)^2.");

    // ---------------------------------------------------------- environment
    py::class_<NonThermal>(m, "NonThermal",
                           "Directly prescribed diffusion energy (J).")
        .def(py::init<double>(), py::arg("energy"))
        .def_readonly("energy", &NonThermal::energy);
    py::class_<ClassicalThermal>(m, "ClassicalThermal",
                                 "Classical thermal bath: E = k_B * T.")
        .def(py::init<double>(), py::arg("temperature"))
        .def_readonly("temperature", &ClassicalThermal::temperature);
    py::class_<OscillatorBath>(m, "OscillatorBath",
                               "Quantum oscillator bath: E = (omega*hbar/2) * "
                               "coth(omega*hbar / 2 k_B T).")
        .def(py::init<double, double>(), py::arg("omega"), py::arg("temperature"))
        .def_readonly("omega", &OscillatorBath::omega)
        .def_readonly("temperature", &OscillatorBath::temperature);
    py::class_<FermiBath>(m, "FermiBath",
                          "Ideal Fermi gas in its low-temperature expansion, T <= T_F.")
        .def(py::init<double, double>(), py::arg("fermi_temperature"),
             py::arg("temperature"))
        .def_readonly("fermi_temperature", &FermiBath::fermi_temperature)
        .def_readonly("temperature", &FermiBath::temperature);
    py::class_<BoseBath>(m, "BoseBath",
                         "Ideal Bose gas at or below condensation, T <= T_BE.")
        .def(py::init<double, double>(), py::arg("condensation_temperature"),
             py::arg("temperature"))
        .def_readonly("condensation_temperature", &BoseBath::condensation_temperature)
        .def_readonly("temperature", &BoseBath::temperature);

    m.def("diffusion_energy", &diffusion_energy, py::arg("env"),
          "The bath's diffusion energy in joules.");
    m.def("is_quantum", &is_quantum, py::arg("env"),
          "True for baths whose diffusion energy stays finite at T = 0.");
    m.def("fermi_temperature", &fermi_temperature, py::arg("number_density"),
          py::arg("degeneracy"), py::arg("mass"),
          "Fermi temperature of an ideal Fermi gas, K.");
    m.def("bose_einstein_temperature", &bose_einstein_temperature,
          py::arg("number_density"), py::arg("degeneracy"), py::arg("mass"),
          "Bose-Einstein condensation temperature, K.");
    m.def("fluctuation_strength", &fluctuation_strength, py::arg("beta"), py::arg("mass"),
          py::arg("energy"),
          "Fluctuation-dissipation noise amplitude sqrt(2*beta*m*E).");

    py::class_<ClosureParameters>(m, "ClosureParameters",
                                  "The closure a = t_c = hbar/2E, gamma = E/hbar.")
        .def_readonly("a", &ClosureParameters::a)
        .def_readonly("gamma", &ClosureParameters::gamma)
        .def_readonly("t_c", &ClosureParameters::t_c);
    m.def("closure", &closure, py::arg("energy"),
          "Collapse all microscopic scales to one diffusion energy.");

    // ---------------------------------------------------------------- kernel
    py::class_<CorrelationKernel>(
        m, "CorrelationKernel",
        "Noise-intensity kernel I(t) with correlation time t_c (s); lambda = 0 is the "
        "normal kernel, lambda > 1 adds the anomalous power-law drive.")
        .def(py::init<double>(), py::arg("t_c"))
        .def(py::init<double, double>(), py::arg("t_c"), py::arg("lambda_"))
        .def("intensity", &CorrelationKernel::intensity, py::arg("t"), "I(t).")
        .def("intensity_integral", &CorrelationKernel::intensity_integral, py::arg("t"),
             "J(t) = integral of I from 0 to t.")
        .def("alpha_intensity", &CorrelationKernel::alpha_intensity, py::arg("alpha"),
             "Exponentially weighted intensity integral over [0, inf).")
        .def("correlation_time", &CorrelationKernel::correlation_time)
        .def("exponent", &CorrelationKernel::exponent);

    // -------------------------------------------------------------- analytic
    py::class_<GaussianState>(m, "GaussianState",
                              "Second moments of the zero-mean Gaussian state.")
        .def_readonly("t", &GaussianState::t)
        .def_readonly("sigma_x", &GaussianState::sigma_x)
        .def_readonly("sigma_p", &GaussianState::sigma_p)
        .def_readonly("cov_xp", &GaussianState::cov_xp);

    py::class_<Observables>(m, "Observables",
                            "Derived observables; fields a scenario does not define are "
                            "None.  D = X*V holds whenever both are present.")
        .def_readonly("X", &Observables::X)
        .def_readonly("P", &Observables::P)
        .def_readonly("V", &Observables::V)
        .def_readonly("F", &Observables::F)
        .def_readonly("D", &Observables::D)
        .def_readonly("meanE", &Observables::meanE);

    m.def("classical_inertial_free_msp", &classical_inertial_free_msp, py::arg("spec"),
          py::arg("init"), py::arg("env"), py::arg("kernel"), py::arg("t"),
          "Mean square momentum of the free inertial particle, (kg m/s)^2.");
    m.def("classical_inertial_free_force", &classical_inertial_free_force, py::arg("spec"),
          py::arg("init"), py::arg("env"), py::arg("kernel"), py::arg("t"),
          "Thermal force d sqrt(<P^2>)/dt of the same scenario, N.");
    m.def("classical_inertial_free_rmsd", &classical_inertial_free_rmsd, py::arg("spec"),
          py::arg("env"), py::arg("kernel"), py::arg("t"),
          "RMS displacement, velocity and diffusion coefficient of the free inertial "
          "particle started at the origin in momentum equilibrium.");
    m.def("classical_noninertial_free", &classical_noninertial_free, py::arg("spec"),
          py::arg("env"), py::arg("kernel"), py::arg("t"),
          "Overdamped free particle from a sharp origin.");

    py::class_<OscillatorMoments>(m, "OscillatorMoments",
                                  "Overdamped oscillator observables with <X^2> = 2G.")
        .def_readonly("obs", &OscillatorMoments::obs)
        .def_readonly("G", &OscillatorMoments::G);
    m.def("classical_noninertial_oscillator", &classical_noninertial_oscillator,
          py::arg("spec"), py::arg("env"), py::arg("kernel"), py::arg("t"),
          "Overdamped harmonic oscillator from a sharp origin.");

    py::enum_<AnomalousScenario>(m, "AnomalousScenario")
        .value("NonInertialFree", AnomalousScenario::NonInertialFree)
        .value("NonInertialOscillator", AnomalousScenario::NonInertialOscillator)
        .value("MomentumSpace", AnomalousScenario::MomentumSpace)
        .value("ConfigInertial", AnomalousScenario::ConfigInertial);
    m.def("anomalous_msd", &anomalous_msd, py::arg("scenario"), py::arg("lambda_"),
          py::arg("spec"), py::arg("env"), py::arg("kernel"), py::arg("t"),
          "Anomalous mean square displacement (m^2), or <P^2> for MomentumSpace.");

    py::class_<QuantumFpFree>(m, "QuantumFpFree",
                              "Free quantum evolution in the momentum-space density "
                              "description; sigma_x*sigma_p = hbar/2 exactly.")
        .def_readonly("A", &QuantumFpFree::A)
        .def_readonly("state", &QuantumFpFree::state)
        .def_readonly("obs", &QuantumFpFree::obs)
        .def_readonly("d_valid", &QuantumFpFree::d_valid);
    m.def("quantum_fp_free", &quantum_fp_free, py::arg("spec"), py::arg("init"),
          py::arg("env"), py::arg("kernel"), py::arg("t"));

    m.def("quantum_fp_free_closed", &quantum_fp_free_closed, py::arg("spec"),
          py::arg("env"), py::arg("t"),
          "The same evolution with every scale eliminated by the closure; D is reported "
          "only up to its zero crossing at t_q*ln 2.");

    py::class_<QuantumLangevinFree>(m, "QuantumLangevinFree",
                                    "Free quantum Langevin moments; sigma_x*sigma_p > "
                                    "hbar/2 for t > 0.")
        .def_readonly("state", &QuantumLangevinFree::state)
        .def_readonly("obs", &QuantumLangevinFree::obs);
    m.def("quantum_langevin_free", &quantum_langevin_free, py::arg("spec"), py::arg("env"),
          py::arg("kernel"), py::arg("t"));

    py::class_<QuantumSmoluchowskiFree>(m, "QuantumSmoluchowskiFree",
                                        "Overdamped free quantum evolution, <X^2> = 2b.")
        .def_readonly("b", &QuantumSmoluchowskiFree::b)
        .def_readonly("state", &QuantumSmoluchowskiFree::state)
        .def_readonly("obs", &QuantumSmoluchowskiFree::obs);
    m.def("quantum_smoluchowski_free", &quantum_smoluchowski_free, py::arg("spec"),
          py::arg("init"), py::arg("env"), py::arg("kernel"), py::arg("t"));

    py::class_<QuantumSmoluchowskiOscillator>(
        m, "QuantumSmoluchowskiOscillator",
        "Overdamped harmonic quantum evolution, <X^2> = B/2.")
        .def_readonly("B", &QuantumSmoluchowskiOscillator::B)
        .def_readonly("state", &QuantumSmoluchowskiOscillator::state)
        .def_readonly("obs", &QuantumSmoluchowskiOscillator::obs);
    m.def("quantum_smoluchowski_oscillator", &quantum_smoluchowski_oscillator,
          py::arg("spec"), py::arg("init"), py::arg("env"), py::arg("kernel"),
          py::arg("t"));

    py::enum_<QuantumAnomalousScenario>(m, "QuantumAnomalousScenario")
        .value("Inertial", QuantumAnomalousScenario::Inertial)
        .value("NonInertial", QuantumAnomalousScenario::NonInertial);
    py::class_<AnomalousAsymptotics>(m, "AnomalousAsymptotics",
                                     "Long-time anomalous quantum moments with "
                                     "<P^2><X^2> = hbar^2/4.")
        .def_readonly("p2", &AnomalousAsymptotics::p2)
        .def_readonly("x2", &AnomalousAsymptotics::x2);
    m.def("quantum_anomalous_asymptotics", &quantum_anomalous_asymptotics,
          py::arg("scenario"), py::arg("lambda_"), py::arg("spec"), py::arg("env"),
          py::arg("t_c"), py::arg("t"));

    // ------------------------------------------------------------------- sde
    py::class_<SimulationConfig>(
        m, "SimulationConfig",
        "Euler-Maruyama run configuration.  dt must respect the stability bound "
        "min(t_c, 1/(2 gamma), 1/omega)/20 unless override_stability is set; "
        "record_times are snapped to the nearest step.")
        .def(py::init([](double dt, double t_end, std::uint64_t n_paths, std::uint64_t seed,
                         std::vector<double> record_times, double x0, double p0,
                         bool override_stability, unsigned threads) {
                 SimulationConfig cfg;
                 cfg.dt = dt;
                 cfg.t_end = t_end;
                 cfg.n_paths = n_paths;
                 cfg.seed = seed;
                 cfg.record_times = std::move(record_times);
                 cfg.x0 = x0;
                 cfg.p0 = p0;
                 cfg.override_stability = override_stability;
                 cfg.threads = threads;
                 return cfg;
             }),
             py::arg("dt"), py::arg("t_end"), py::arg("n_paths"), py::arg("seed") = 0,
             py::arg("record_times") = std::vector<double>{}, py::arg("x0") = 0.0,
             py::arg("p0") = 0.0, py::arg("override_stability") = false,
             py::arg("threads") = 0)
        .def_readwrite("dt", &SimulationConfig::dt)
        .def_readwrite("t_end", &SimulationConfig::t_end)
        .def_readwrite("n_paths", &SimulationConfig::n_paths)
        .def_readwrite("seed", &SimulationConfig::seed)
        .def_readwrite("record_times", &SimulationConfig::record_times)
        .def_readwrite("x0", &SimulationConfig::x0)
        .def_readwrite("p0", &SimulationConfig::p0)
        .def_readwrite("override_stability", &SimulationConfig::override_stability)
        .def_readwrite("threads", &SimulationConfig::threads);

    py::class_<EnsembleStats>(m, "EnsembleStats",
                              "Per-record-time sample moments with standard errors; "
                              "non-inertial runs leave the momentum vectors empty.")
        .def_readonly("times", &EnsembleStats::times)
        .def_readonly("mean_x", &EnsembleStats::mean_x)
        .def_readonly("mean_p", &EnsembleStats::mean_p)
        .def_readonly("m2_x", &EnsembleStats::m2_x)
        .def_readonly("m2_p", &EnsembleStats::m2_p)
        .def_readonly("mean_px", &EnsembleStats::mean_px)
        .def_readonly("se_mean_x", &EnsembleStats::se_mean_x)
        .def_readonly("se_mean_p", &EnsembleStats::se_mean_p)
        .def_readonly("se_m2_x", &EnsembleStats::se_m2_x)
        .def_readonly("se_m2_p", &EnsembleStats::se_m2_p)
        .def_readonly("se_mean_px", &EnsembleStats::se_mean_px)
        .def_readonly("n_paths", &EnsembleStats::n_paths);

    m.def("simulate_inertial", &simulate_inertial, py::arg("spec"), py::arg("env"),
          py::arg("kernel"), py::arg("init"), py::arg("cfg"),
          py::call_guard<py::gil_scoped_release>(),
          "Phase-space Langevin ensemble with effective damping 2*gamma; statistics are "
          "bit-identical for any thread count.");
    m.def("simulate_noninertial", &simulate_noninertial, py::arg("spec"), py::arg("env"),
          py::arg("kernel"), py::arg("init"), py::arg("cfg"),
          py::call_guard<py::gil_scoped_release>(),
          "Overdamped Langevin ensemble with damping gamma.");

    py::class_<ExponentEstimate>(m, "ExponentEstimate",
                                 "OLS slope of log(MSD) vs log(t) with standard error.")
        .def_readonly("lambda_hat", &ExponentEstimate::lambda_hat)
        .def_readonly("se", &ExponentEstimate::se);
    m.def("estimate_msd_exponent", &estimate_msd_exponent, py::arg("stats"),
          py::arg("t_lo"), py::arg("t_hi"),
          "Fit the MSD growth exponent over record times inside [t_lo, t_hi].");

    // ------------------------------------------------------------------- fpe
    py::class_<Grid1D>(m, "Grid1D", "Uniform cell-centered grid over [y_min, y_max].")
        .def(py::init<double, double, std::size_t>(), py::arg("y_min"), py::arg("y_max"),
             py::arg("n_cells"))
        .def_readonly("y_min", &Grid1D::y_min)
        .def_readonly("y_max", &Grid1D::y_max)
        .def_readonly("n_cells", &Grid1D::n_cells)
        .def("dy", &Grid1D::dy)
        .def("center", &Grid1D::center, py::arg("i"));

    py::class_<DensitySnapshot>(m, "DensitySnapshot",
                                "Density at one requested output time with its discrete "
                                "moments; initial_variance is the exact offset of the "
                                "regularised delta.")
        .def_readonly("t", &DensitySnapshot::t)
        .def_readonly("values", &DensitySnapshot::values)
        .def_readonly("norm", &DensitySnapshot::norm)
        .def_readonly("mean", &DensitySnapshot::mean)
        .def_readonly("variance", &DensitySnapshot::variance)
        .def_readonly("initial_variance", &DensitySnapshot::initial_variance)
        .def_readonly("clipped_mass", &DensitySnapshot::clipped_mass);

    m.def("solve_rayleigh", &solve_rayleigh, py::arg("spec"), py::arg("env"),
          py::arg("kernel"), py::arg("grid"), py::arg("dt"), py::arg("t_end"),
          py::arg("record_times"), py::call_guard<py::gil_scoped_release>(),
          "Momentum-space relaxation toward the Maxwell distribution.");
    m.def("solve_smoluchowski", &solve_smoluchowski, py::arg("spec"), py::arg("env"),
          py::arg("kernel"), py::arg("grid"), py::arg("dt"), py::arg("t_end"),
          py::arg("record_times"), py::call_guard<py::gil_scoped_release>(),
          "Position-space overdamped dynamics.");

    // ----------------------------------------------------------------- rates
    py::class_<BarrierSpec>(m, "BarrierSpec",
                            "Well and barrier curvature frequencies (rad/s) and barrier "
                            "height (J).")
        .def(py::init<double, double, double>(), py::arg("omega_a"), py::arg("omega_b"),
             py::arg("delta_V"))
        .def_readonly("omega_a", &BarrierSpec::omega_a)
        .def_readonly("omega_b", &BarrierSpec::omega_b)
        .def_readonly("delta_V", &BarrierSpec::delta_V);

    py::class_<RateResult>(m, "RateResult", "Escape rate (1/s) with validity metadata.")
        .def_readonly("rate", &RateResult::rate)
        .def_readonly("valid", &RateResult::valid)
        .def_readonly("condition_margin", &RateResult::condition_margin)
        .def_readonly("time_capped", &RateResult::time_capped)
        .def_readonly("regime_note", &RateResult::regime_note);

    m.def("kramers_classical", &kramers_classical, py::arg("spec"), py::arg("barrier"),
          py::arg("env"), "Stationary inertial escape rate.");
    m.def("kramers_classical_nonmarkov", &kramers_classical_nonmarkov, py::arg("spec"),
          py::arg("barrier"), py::arg("env"), py::arg("kernel"), py::arg("t"),
          py::arg("t_max") = -1.0,
          "Transient escape rate while the noise builds up; evaluation is clamped at "
          "t_max (default 20/gamma).");
    m.def("kramers_quantum_inertial", &kramers_quantum_inertial, py::arg("spec"),
          py::arg("barrier"), py::arg("env"),
          "Stationary inertial rate with a quantum bath's diffusion energy.");
    m.def("kramers_quantum_inertial_nonmarkov", &kramers_quantum_inertial_nonmarkov,
          py::arg("spec"), py::arg("barrier"), py::arg("env"), py::arg("kernel"),
          py::arg("t"), py::arg("t_max") = -1.0);
    m.def("kramers_quantum_noninertial", &kramers_quantum_noninertial, py::arg("spec"),
          py::arg("barrier"), py::arg("env"), py::arg("a_param"),
          "Overdamped quantum rate; a_param must lie in [0, m*hbar*omega_b^2 / 2E).");
    m.def("a_param_zero", &a_param_zero);
    m.def("a_param_half_mass_omega_b", &a_param_half_mass_omega_b, py::arg("spec"),
          py::arg("barrier"));
    m.def("a_param_half_mass_over_tc", &a_param_half_mass_over_tc, py::arg("spec"),
          py::arg("t_c"));
}
