#include "bmx/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "bmx/analytic.hpp"
#include "bmx/constants.hpp"
#include "bmx/environment.hpp"
#include "bmx/errors.hpp"
#include "bmx/fpe.hpp"
#include "bmx/kernel.hpp"
#include "bmx/particle.hpp"
#include "bmx/rates.hpp"
#include "bmx/sde.hpp"

namespace bmx {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

const std::set<std::string>& known_sections() {
    static const std::set<std::string> sections{"particle", "environment", "kernel", "initial",
                                                "run"};
    return sections;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

bool ParsedConfig::has(const std::string& section, const std::string& key) const {
    const auto sec = sections.find(section);
    return sec != sections.end() && sec->second.count(key) > 0;
}

std::string ParsedConfig::get_string(const std::string& section, const std::string& key) const {
    const auto sec = sections.find(section);
    if (sec != sections.end()) {
        const auto it = sec->second.find(key);
        if (it != sec->second.end()) {
            return it->second;
        }
    }
    throw config_error("missing configuration key [" + section + "] " + key);
}

std::string ParsedConfig::get_string(const std::string& section, const std::string& key,
                                     const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double ParsedConfig::get_double(const std::string& section, const std::string& key) const {
    const std::string raw = get_string(section, key);
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0') {
        throw config_error("key [" + section + "] " + key + " is not a number: '" + raw + "'");
    }
    return v;
}

double ParsedConfig::get_double(const std::string& section, const std::string& key,
                                double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t ParsedConfig::get_int(const std::string& section, const std::string& key) const {
    const std::string raw = get_string(section, key);
    char* end = nullptr;
    const long long v = std::strtoll(raw.c_str(), &end, 10);
    if (end == raw.c_str() || *end != '\0') {
        throw config_error("key [" + section + "] " + key + " is not an integer: '" + raw + "'");
    }
    return v;
}

std::int64_t ParsedConfig::get_int(const std::string& section, const std::string& key,
                                   std::int64_t fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

bool ParsedConfig::get_bool(const std::string& section, const std::string& key,
                            bool fallback) const {
    if (!has(section, key)) {
        return fallback;
    }
    const std::string raw = get_string(section, key);
    if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") {
        return true;
    }
    if (raw == "false" || raw == "0" || raw == "no" || raw == "off") {
        return false;
    }
    throw config_error("key [" + section + "] " + key + " is not a boolean: '" + raw + "'");
}

std::vector<double> ParsedConfig::get_double_list(const std::string& section,
                                                  const std::string& key) const {
    const std::string raw = get_string(section, key);
    std::vector<double> values;
    std::stringstream stream(raw);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const std::string token = trim(item);
        if (token.empty()) {
            throw config_error("key [" + section + "] " + key + " has an empty list entry");
        }
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0') {
            throw config_error("key [" + section + "] " + key + " has a non-numeric entry: '" +
                               token + "'");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw config_error("key [" + section + "] " + key + " is an empty list");
    }
    return values;
}

ParsedConfig parse_config_text(const std::string& text, const std::string& origin) {
    ParsedConfig cfg;
    cfg.source_text = text;
    std::istringstream stream(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') {
            continue;
        }
        const std::string where = origin + ":" + std::to_string(line_no);
        if (stripped.front() == '[') {
            if (stripped.back() != ']') {
                throw config_error(where + ": unterminated section header");
            }
            section = trim(stripped.substr(1, stripped.size() - 2));
            if (known_sections().count(section) == 0) {
                throw config_error(where + ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw config_error(where + ": expected 'key = value'");
        }
        if (section.empty()) {
            throw config_error(where + ": key outside any section");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw config_error(where + ": empty key");
        }
        if (value.empty()) {
            throw config_error(where + ": empty value for key '" + key + "'");
        }
        if (!cfg.sections[section].emplace(key, value).second) {
            throw config_error(where + ": duplicate key '" + key + "'");
        }
    }
    return cfg;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw config_error("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

// ------------------------------------------------------------ object builders

namespace {

ParticleSpec build_particle(const ParsedConfig& cfg) {
    const double mass = cfg.get_double("particle", "mass");
    const double gamma = cfg.get_double("particle", "gamma");
    const std::string pot = cfg.get_string("particle", "potential", "free");
    if (pot == "free") {
        return ParticleSpec(mass, gamma);
    }
    if (pot == "harmonic") {
        return ParticleSpec(mass, gamma, HarmonicPotential(cfg.get_double("particle", "omega")));
    }
    throw config_error("unknown potential '" + pot + "' (expected free or harmonic)");
}

Environment build_environment(const ParsedConfig& cfg) {
    const std::string kind = cfg.get_string("environment", "kind");
    if (kind == "nonthermal") {
        return NonThermal(cfg.get_double("environment", "energy"));
    }
    if (kind == "classical") {
        return ClassicalThermal(cfg.get_double("environment", "temperature"));
    }
    if (kind == "oscillator") {
        return OscillatorBath(cfg.get_double("environment", "omega"),
                              cfg.get_double("environment", "temperature"));
    }
    if (kind == "fermi") {
        double t_f;
        if (cfg.has("environment", "fermi_temperature")) {
            t_f = cfg.get_double("environment", "fermi_temperature");
        } else {
            t_f = fermi_temperature(cfg.get_double("environment", "number_density"),
                                    cfg.get_double("environment", "degeneracy"),
                                    cfg.get_double("environment", "mass"));
        }
        return FermiBath(t_f, cfg.get_double("environment", "temperature"));
    }
    if (kind == "bose") {
        double t_be;
        if (cfg.has("environment", "condensation_temperature")) {
            t_be = cfg.get_double("environment", "condensation_temperature");
        } else {
            t_be = bose_einstein_temperature(cfg.get_double("environment", "number_density"),
                                             cfg.get_double("environment", "degeneracy"),
                                             cfg.get_double("environment", "mass"));
        }
        return BoseBath(t_be, cfg.get_double("environment", "temperature"));
    }
    throw config_error("unknown environment kind '" + kind +
                       "' (expected nonthermal, classical, oscillator, fermi or bose)");
}

CorrelationKernel build_kernel(const ParsedConfig& cfg) {
    return CorrelationKernel(cfg.get_double("kernel", "t_c"),
                             cfg.get_double("kernel", "lambda", 0.0));
}

// `thermal` resolves to a momentum variance in equipartition with the
// environment's diffusion energy.
InitialCondition build_initial(const ParsedConfig& cfg, const ParticleSpec& spec,
                               const Environment& env) {
    const std::string kind = cfg.get_string("initial", "kind", "sharp");
    if (kind == "sharp") {
        return SharpOrigin{};
    }
    if (kind == "momentum") {
        return MomentumVariance(cfg.get_double("initial", "p2_0"));
    }
    if (kind == "thermal") {
        return MomentumVariance(spec.mass * diffusion_energy(env));
    }
    if (kind == "minimal") {
        return MinimalGaussian(cfg.get_double("initial", "a"));
    }
    throw config_error("unknown initial kind '" + kind +
                       "' (expected sharp, momentum, thermal or minimal)");
}

std::vector<double> build_time_grid(const ParsedConfig& cfg) {
    const double t_min = cfg.get_double("run", "time_grid.min", 0.0);
    const double t_max = cfg.get_double("run", "time_grid.max");
    const std::int64_t points = cfg.get_int("run", "time_grid.points", 101);
    const std::string spacing = cfg.get_string("run", "time_grid.spacing", "linear");
    if (!(t_max > t_min) || !(t_min >= 0.0)) {
        throw config_error("time grid requires 0 <= time_grid.min < time_grid.max");
    }
    if (points < 1 || points > 10'000'000) {
        throw config_error("time_grid.points must be between 1 and 10^7");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        grid.push_back(t_max);
        return grid;
    }
    if (spacing == "linear") {
        for (std::int64_t i = 0; i < points; ++i) {
            grid.push_back(t_min + (t_max - t_min) * static_cast<double>(i) /
                                       static_cast<double>(points - 1));
        }
    } else if (spacing == "log") {
        if (!(t_min > 0.0)) {
            throw config_error("log spacing requires time_grid.min > 0");
        }
        const double l0 = std::log(t_min);
        const double l1 = std::log(t_max);
        for (std::int64_t i = 0; i < points; ++i) {
            grid.push_back(std::exp(l0 + (l1 - l0) * static_cast<double>(i) /
                                             static_cast<double>(points - 1)));
        }
    } else {
        throw config_error("unknown time_grid.spacing '" + spacing + "' (linear or log)");
    }
    grid.back() = t_max;  // guard the endpoint against rounding
    return grid;
}

void require_mode(const ParsedConfig& cfg, const std::string& expected) {
    const std::string mode = cfg.get_string("run", "mode");
    if (mode != expected) {
        throw config_error("run.mode is '" + mode + "' but the invoked subcommand expects '" +
                           expected + "'");
    }
}

// ------------------------------------------------------------ moments driver

struct MomentRow {
    std::optional<double> X, P, V, F, D, meanE, cov;
};

double opt(const std::optional<double>& v) { return v ? *v : kNaN; }

void push_moment_row(ResultTable& table, double t, const MomentRow& row, bool with_cov) {
    std::vector<double> r{t,           opt(row.X), opt(row.P),    opt(row.V),
                          opt(row.F),  opt(row.D), opt(row.meanE)};
    if (row.X && row.P) {
        r.push_back(*row.X * *row.P);
    } else {
        r.push_back(kNaN);
    }
    if (with_cov) {
        r.push_back(opt(row.cov));
    }
    table.rows.push_back(std::move(r));
}

MomentRow from_observables(const Observables& obs) {
    MomentRow row;
    row.X = obs.X;
    row.P = obs.P;
    row.V = obs.V;
    row.F = obs.F;
    row.D = obs.D;
    row.meanE = obs.meanE;
    return row;
}

}  // namespace

ResultTable run_moments(const ParsedConfig& cfg) {
    require_mode(cfg, "analytic");
    const ParticleSpec spec = build_particle(cfg);
    const Environment env = build_environment(cfg);
    const CorrelationKernel kernel = build_kernel(cfg);
    const std::string scenario = cfg.get_string("run", "scenario");
    const std::vector<double> times = build_time_grid(cfg);
    const double lambda = kernel.exponent();

    const bool with_cov = scenario == "quantum_langevin";
    // The diffusion column lives in momentum space for the free momentum-space
    // density and in position space everywhere else.
    const char* d_header =
        scenario == "quantum_fp_free" ? "D (kg^2 m^2/s^3)" : "D (m^2/s)";
    ResultTable table;
    table.columns = {"t (s)",       "X (m)", "P (kg m/s)",
                     "V (m/s)",     "F (N)", d_header,
                     "meanE (J)",   "heisenberg_product (J s)"};
    if (with_cov) {
        table.columns.push_back("cov_xp (J s)");
    }
    table.notes.push_back("scenario: " + scenario);

    bool d_invalid_seen = false;
    for (double t : times) {
        MomentRow row;
        if (scenario == "momentum") {
            const InitialCondition init = build_initial(cfg, spec, env);
            row.P = std::sqrt(classical_inertial_free_msp(spec, init, env, kernel, t));
            row.F = classical_inertial_free_force(spec, init, env, kernel, t);
        } else if (scenario == "rmsd") {
            row = from_observables(classical_inertial_free_rmsd(spec, env, kernel, t));
        } else if (scenario == "noninertial_free") {
            row = from_observables(classical_noninertial_free(spec, env, kernel, t));
        } else if (scenario == "noninertial_oscillator") {
            row = from_observables(classical_noninertial_oscillator(spec, env, kernel, t).obs);
        } else if (scenario == "anomalous_noninertial_free") {
            row.X = std::sqrt(
                anomalous_msd(AnomalousScenario::NonInertialFree, lambda, spec, env, kernel, t));
        } else if (scenario == "anomalous_noninertial_oscillator") {
            row.X = std::sqrt(anomalous_msd(AnomalousScenario::NonInertialOscillator, lambda, spec,
                                            env, kernel, t));
        } else if (scenario == "anomalous_momentum") {
            row.P = std::sqrt(
                anomalous_msd(AnomalousScenario::MomentumSpace, lambda, spec, env, kernel, t));
        } else if (scenario == "anomalous_config_inertial") {
            row.X = std::sqrt(
                anomalous_msd(AnomalousScenario::ConfigInertial, lambda, spec, env, kernel, t));
        } else if (scenario == "quantum_fp_free") {
            const InitialCondition init = build_initial(cfg, spec, env);
            const auto* minimal = std::get_if<MinimalGaussian>(&init);
            if (minimal == nullptr) {
                throw scenario_error("quantum_fp_free requires initial kind = minimal");
            }
            const QuantumFpFree result = quantum_fp_free(spec, *minimal, env, kernel, t);
            row = from_observables(result.obs);
            d_invalid_seen = d_invalid_seen || !result.d_valid;
        } else if (scenario == "quantum_fp_closed") {
            row = from_observables(quantum_fp_free_closed(spec, env, t));
        } else if (scenario == "quantum_langevin") {
            const QuantumLangevinFree result = quantum_langevin_free(spec, env, kernel, t);
            row = from_observables(result.obs);
            row.cov = result.state.cov_xp;
        } else if (scenario == "quantum_smoluchowski_free") {
            const InitialCondition init = build_initial(cfg, spec, env);
            const auto* minimal = std::get_if<MinimalGaussian>(&init);
            if (minimal == nullptr) {
                throw scenario_error("quantum_smoluchowski_free requires initial kind = minimal");
            }
            row = from_observables(quantum_smoluchowski_free(spec, *minimal, env, kernel, t).obs);
        } else if (scenario == "quantum_smoluchowski_oscillator") {
            const InitialCondition init = build_initial(cfg, spec, env);
            const auto* minimal = std::get_if<MinimalGaussian>(&init);
            if (minimal == nullptr) {
                throw scenario_error(
                    "quantum_smoluchowski_oscillator requires initial kind = minimal");
            }
            row = from_observables(
                quantum_smoluchowski_oscillator(spec, *minimal, env, kernel, t).obs);
        } else if (scenario == "quantum_anomalous_inertial" ||
                   scenario == "quantum_anomalous_noninertial") {
            const auto which = scenario == "quantum_anomalous_inertial"
                                   ? QuantumAnomalousScenario::Inertial
                                   : QuantumAnomalousScenario::NonInertial;
            const AnomalousAsymptotics asym = quantum_anomalous_asymptotics(
                which, lambda, spec, env, kernel.correlation_time(), t);
            row.X = std::sqrt(asym.x2);
            row.P = std::sqrt(asym.p2);
        } else {
            throw config_error("unknown analytic scenario '" + scenario + "'");
        }
        push_moment_row(table, t, row, with_cov);
    }
    if (d_invalid_seen) {
        table.notes.push_back(
            "note: the relaxation kernel turned negative at some times; D there describes "
            "variance contraction");
    }
    return table;
}

// ----------------------------------------------------------- simulate driver

namespace {

SimulationConfig build_sim_config(const ParsedConfig& cfg, const std::vector<double>& times) {
    SimulationConfig sim;
    sim.dt = cfg.get_double("run", "sde.dt");
    sim.t_end = times.back();
    sim.n_paths = static_cast<std::uint64_t>(cfg.get_int("run", "sde.n_paths"));
    sim.seed = static_cast<std::uint64_t>(cfg.get_int("run", "sde.seed", 0));
    sim.record_times = times;
    sim.x0 = cfg.get_double("run", "sde.x0", 0.0);
    sim.p0 = cfg.get_double("run", "sde.p0", 0.0);
    sim.override_stability = cfg.get_bool("run", "sde.override_stability", false);
    sim.threads = static_cast<unsigned>(cfg.get_int("run", "sde.threads", 0));
    return sim;
}

bool is_anomalous_closed_form(double lambda) {
    return lambda == 2.0 || lambda == 3.0 || lambda == 4.0;
}

}  // namespace

ResultTable run_simulate(const ParsedConfig& cfg) {
    require_mode(cfg, "simulate");
    const ParticleSpec spec = build_particle(cfg);
    const Environment env = build_environment(cfg);
    const CorrelationKernel kernel = build_kernel(cfg);
    const InitialCondition init = build_initial(cfg, spec, env);
    const std::string scenario = cfg.get_string("run", "scenario");
    const std::vector<double> times = build_time_grid(cfg);
    const SimulationConfig sim = build_sim_config(cfg, times);
    const std::string init_kind = cfg.get_string("initial", "kind", "sharp");
    const double lambda = kernel.exponent();
    const bool zero_offsets = sim.x0 == 0.0 && sim.p0 == 0.0;

    ResultTable table;
    table.notes.push_back("scenario: " + scenario);
    table.notes.push_back("paths: " + std::to_string(sim.n_paths));

    if (scenario == "inertial") {
        const EnsembleStats stats = simulate_inertial(spec, env, kernel, init, sim);
        // Closed-form references exist for the free particle: the momentum
        // variance for any initial variance, and the displacement variance
        // for the equipartition start.
        const bool ref_p =
            zero_offsets && spec.is_free() &&
            (lambda == 0.0 || (is_anomalous_closed_form(lambda) && init_kind == "sharp"));
        const bool ref_x = zero_offsets && spec.is_free() && init_kind == "thermal" &&
                           (lambda == 0.0 || is_anomalous_closed_form(lambda));
        table.columns = {"t (s)",
                         "mean_x (m)",
                         "mean_p (kg m/s)",
                         "m2_x (m^2)",
                         "m2_p (kg^2 m^2/s^2)",
                         "mean_px (kg m^2/s)",
                         "se_mean_x (m)",
                         "se_mean_p (kg m/s)",
                         "se_m2_x (m^2)",
                         "se_m2_p (kg^2 m^2/s^2)",
                         "se_mean_px (kg m^2/s)"};
        if (ref_p) {
            table.columns.push_back("ref_m2_p (kg^2 m^2/s^2)");
            table.columns.push_back("z_m2_p (1)");
        }
        if (ref_x) {
            table.columns.push_back("ref_m2_x (m^2)");
            table.columns.push_back("z_m2_x (1)");
        }
        for (std::size_t i = 0; i < stats.times.size(); ++i) {
            const double t = stats.times[i];
            std::vector<double> row{t,
                                    stats.mean_x[i],
                                    stats.mean_p[i],
                                    stats.m2_x[i],
                                    stats.m2_p[i],
                                    stats.mean_px[i],
                                    stats.se_mean_x[i],
                                    stats.se_mean_p[i],
                                    stats.se_m2_x[i],
                                    stats.se_m2_p[i],
                                    stats.se_mean_px[i]};
            if (ref_p) {
                const double ref =
                    lambda == 0.0
                        ? classical_inertial_free_msp(spec, init, env, kernel, t)
                        : anomalous_msd(AnomalousScenario::MomentumSpace, lambda, spec, env,
                                        kernel, t);
                row.push_back(ref);
                row.push_back(stats.se_m2_p[i] > 0.0 ? (stats.m2_p[i] - ref) / stats.se_m2_p[i]
                                                     : kNaN);
            }
            if (ref_x) {
                const double ref =
                    lambda == 0.0
                        ? [&] {
                              const Observables obs =
                                  classical_inertial_free_rmsd(spec, env, kernel, t);
                              return *obs.X * *obs.X;
                          }()
                        : anomalous_msd(AnomalousScenario::ConfigInertial, lambda, spec, env,
                                        kernel, t);
                row.push_back(ref);
                row.push_back(stats.se_m2_x[i] > 0.0 ? (stats.m2_x[i] - ref) / stats.se_m2_x[i]
                                                     : kNaN);
            }
            table.rows.push_back(std::move(row));
        }
        if (cfg.has("run", "sde.fit_t_min")) {
            const ExponentEstimate est =
                estimate_msd_exponent(stats, cfg.get_double("run", "sde.fit_t_min"),
                                      cfg.get_double("run", "sde.fit_t_max"));
            table.notes.push_back("msd_exponent: " + format_double(est.lambda_hat) + " +/- " +
                                  format_double(est.se));
        }
        return table;
    }

    if (scenario != "noninertial") {
        throw config_error("unknown simulate scenario '" + scenario +
                           "' (expected inertial or noninertial)");
    }
    const EnsembleStats stats = simulate_noninertial(spec, env, kernel, init, sim);
    const bool ref_x = zero_offsets && init_kind == "sharp" &&
                       (spec.is_free() || lambda == 0.0 || is_anomalous_closed_form(lambda));
    table.columns = {"t (s)", "mean_x (m)", "m2_x (m^2)", "se_mean_x (m)", "se_m2_x (m^2)"};
    if (ref_x) {
        table.columns.push_back("ref_m2_x (m^2)");
        table.columns.push_back("z_m2_x (1)");
    }
    for (std::size_t i = 0; i < stats.times.size(); ++i) {
        const double t = stats.times[i];
        std::vector<double> row{t, stats.mean_x[i], stats.m2_x[i], stats.se_mean_x[i],
                                stats.se_m2_x[i]};
        if (ref_x) {
            double ref;
            if (spec.is_free()) {
                ref = (2.0 * diffusion_energy(env) / (spec.mass * spec.gamma)) *
                      kernel.intensity_integral(t);
            } else if (lambda == 0.0) {
                ref = 2.0 * classical_noninertial_oscillator(spec, env, kernel, t).G;
            } else {
                ref = anomalous_msd(AnomalousScenario::NonInertialOscillator, lambda, spec, env,
                                    kernel, t);
            }
            row.push_back(ref);
            row.push_back(stats.se_m2_x[i] > 0.0 ? (stats.m2_x[i] - ref) / stats.se_m2_x[i]
                                                 : kNaN);
        }
        table.rows.push_back(std::move(row));
    }
    if (cfg.has("run", "sde.fit_t_min")) {
        const ExponentEstimate est =
            estimate_msd_exponent(stats, cfg.get_double("run", "sde.fit_t_min"),
                                  cfg.get_double("run", "sde.fit_t_max"));
        table.notes.push_back("msd_exponent: " + format_double(est.lambda_hat) + " +/- " +
                              format_double(est.se));
    }
    return table;
}

// ---------------------------------------------------------------- pde driver

ResultTable run_pde(const ParsedConfig& cfg) {
    require_mode(cfg, "pde");
    const ParticleSpec spec = build_particle(cfg);
    const Environment env = build_environment(cfg);
    const CorrelationKernel kernel = build_kernel(cfg);
    const std::string scenario = cfg.get_string("run", "scenario");
    const std::vector<double> times = build_time_grid(cfg);
    const Grid1D grid(cfg.get_double("run", "pde.y_min"), cfg.get_double("run", "pde.y_max"),
                      static_cast<std::size_t>(cfg.get_int("run", "pde.n_cells")));
    const double dt = cfg.get_double("run", "pde.dt");
    const double lambda = kernel.exponent();
    const double E = diffusion_energy(env);
    const double m = spec.mass;
    const double g = spec.gamma;

    std::vector<DensitySnapshot> snaps;
    if (scenario == "rayleigh") {
        snaps = solve_rayleigh(spec, env, kernel, grid, dt, times.back(), times);
    } else if (scenario == "smoluchowski") {
        snaps = solve_smoluchowski(spec, env, kernel, grid, dt, times.back(), times);
    } else {
        throw config_error("unknown pde scenario '" + scenario +
                           "' (expected rayleigh or smoluchowski)");
    }

    ResultTable table;
    // The Rayleigh density lives on a momentum grid, the Smoluchowski density
    // on a position grid; the moment columns carry the matching units.
    if (scenario == "rayleigh") {
        table.columns = {"t (s)",
                         "norm (1)",
                         "mean (kg m/s)",
                         "variance (kg^2 m^2/s^2)",
                         "ref_variance (kg^2 m^2/s^2)",
                         "clipped_mass (1)"};
    } else {
        table.columns = {"t (s)",          "norm (1)",           "mean (m)",
                         "variance (m^2)", "ref_variance (m^2)", "clipped_mass (1)"};
    }
    table.notes.push_back("scenario: " + scenario);
    table.notes.push_back("cells: " + std::to_string(grid.n_cells));
    for (const auto& snap : snaps) {
        double ref = kNaN;
        const double var0 = snap.initial_variance;
        if (scenario == "rayleigh") {
            if (lambda == 0.0) {
                ref = classical_inertial_free_msp(spec, SharpOrigin{}, env, kernel, snap.t) +
                      var0 * std::exp(-4.0 * g * snap.t);
            } else if (is_anomalous_closed_form(lambda)) {
                ref = anomalous_msd(AnomalousScenario::MomentumSpace, lambda, spec, env, kernel,
                                    snap.t) +
                      var0 * std::exp(-4.0 * g * snap.t);
            }
        } else {
            if (spec.is_free()) {
                ref = (2.0 * E / (m * g)) * kernel.intensity_integral(snap.t) + var0;
            } else if (lambda == 0.0) {
                const double tau = g / (2.0 * spec.omega() * spec.omega());
                ref = 2.0 * classical_noninertial_oscillator(spec, env, kernel, snap.t).G +
                      var0 * std::exp(-snap.t / tau);
            } else if (is_anomalous_closed_form(lambda)) {
                const double tau = g / (2.0 * spec.omega() * spec.omega());
                ref = anomalous_msd(AnomalousScenario::NonInertialOscillator, lambda, spec, env,
                                    kernel, snap.t) +
                      var0 * std::exp(-snap.t / tau);
            }
        }
        table.rows.push_back(
            {snap.t, snap.norm, snap.mean, snap.variance, ref, snap.clipped_mass});
    }
    return table;
}

// -------------------------------------------------------------- rates driver

ResultTable run_rates(const ParsedConfig& cfg) {
    require_mode(cfg, "rates");
    const ParticleSpec spec = build_particle(cfg);
    const Environment env = build_environment(cfg);
    const BarrierSpec barrier(cfg.get_double("run", "rates.omega_a"),
                              cfg.get_double("run", "rates.omega_b"),
                              cfg.get_double("run", "rates.delta_V"));
    const bool quantum = is_quantum(env);

    ResultTable table;
    // condition_margin is the diffusion energy (J) for the inertial forms and
    // the distance to the ordering-parameter bound (kg/s) for the overdamped
    // quantum form.
    auto set_columns = [&table](const char* margin_unit) {
        table.columns = {"t (s)", "rate (1/s)", "valid (1)",
                         std::string("condition_margin (") + margin_unit + ")",
                         "time_capped (1)"};
    };

    auto push = [&table](double t, const RateResult& r) {
        table.rows.push_back({t, r.rate, r.valid ? 1.0 : 0.0, r.condition_margin,
                              r.time_capped ? 1.0 : 0.0});
    };

    if (cfg.has("run", "rates.a_param") || cfg.has("run", "rates.a_preset")) {
        double a;
        if (cfg.has("run", "rates.a_param")) {
            a = cfg.get_double("run", "rates.a_param");
        } else {
            const std::string preset = cfg.get_string("run", "rates.a_preset");
            if (preset == "zero") {
                a = a_param_zero();
            } else if (preset == "half_mass_omega_b") {
                a = a_param_half_mass_omega_b(spec, barrier);
            } else if (preset == "half_mass_over_tc") {
                a = a_param_half_mass_over_tc(spec, cfg.get_double("kernel", "t_c"));
            } else {
                throw config_error("unknown rates.a_preset '" + preset +
                                   "' (zero, half_mass_omega_b or half_mass_over_tc)");
            }
        }
        const RateResult r = kramers_quantum_noninertial(spec, barrier, env, a);
        set_columns("kg/s");
        table.notes.push_back("regime: " + r.regime_note);
        push(kNaN, r);
        return table;
    }

    if (cfg.has("run", "time_grid.max")) {
        const CorrelationKernel kernel = build_kernel(cfg);
        const double t_max = cfg.get_double("run", "rates.t_max", -1.0);
        set_columns("J");
        std::string note;
        for (double t : build_time_grid(cfg)) {
            const RateResult r =
                quantum ? kramers_quantum_inertial_nonmarkov(spec, barrier, env, kernel, t, t_max)
                        : kramers_classical_nonmarkov(spec, barrier, env, kernel, t, t_max);
            note = r.regime_note;
            push(t, r);
        }
        table.notes.push_back("regime: " + note);
        return table;
    }

    const RateResult r =
        quantum ? kramers_quantum_inertial(spec, barrier, env) : kramers_classical(spec, barrier, env);
    set_columns("J");
    table.notes.push_back("regime: " + r.regime_note);
    push(kNaN, r);
    return table;
}

// -------------------------------------------------------------- sweep driver

namespace {

// Unit label for the swept value column, keyed by the full parameter path.
const char* sweep_value_unit(const std::string& path) {
    static const struct {
        const char* path;
        const char* unit;
    } kUnits[] = {
        {"particle.mass", "kg"},
        {"particle.gamma", "1/s"},
        {"particle.omega", "rad/s"},
        {"environment.energy", "J"},
        {"environment.temperature", "K"},
        {"environment.omega", "rad/s"},
        {"kernel.t_c", "s"},
        {"kernel.lambda", "1"},
        {"initial.p2_0", "kg^2 m^2/s^2"},
        {"initial.a", "s"},
        {"run.rates.omega_a", "rad/s"},
        {"run.rates.omega_b", "rad/s"},
        {"run.rates.delta_V", "J"},
        {"run.rates.a_param", "kg/s"},
        {"run.rates.t_max", "s"},
        {"run.sde.dt", "s"},
        {"run.pde.dt", "s"},
    };
    for (const auto& entry : kUnits) {
        if (path == entry.path) {
            return entry.unit;
        }
    }
    return "SI";
}

}  // namespace

ResultTable run_sweep(const ParsedConfig& cfg) {
    require_mode(cfg, "sweep");
    const std::string path = cfg.get_string("run", "sweep.parameter_path");
    const std::vector<double> values = cfg.get_double_list("run", "sweep.values");
    const std::string inner_mode = cfg.get_string("run", "sweep.mode");

    const auto dot = path.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == path.size()) {
        throw config_error("sweep.parameter_path must look like 'section.key'");
    }
    const std::string section = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);
    if (known_sections().count(section) == 0) {
        throw config_error("sweep.parameter_path names unknown section '" + section + "'");
    }

    ResultTable (*inner)(const ParsedConfig&) = nullptr;
    if (inner_mode == "analytic") {
        inner = run_moments;
    } else if (inner_mode == "simulate") {
        inner = run_simulate;
    } else if (inner_mode == "pde") {
        inner = run_pde;
    } else if (inner_mode == "rates") {
        inner = run_rates;
    } else {
        throw config_error("unknown sweep.mode '" + inner_mode +
                           "' (analytic, simulate, pde or rates)");
    }

    const std::uint64_t base_seed =
        static_cast<std::uint64_t>(cfg.get_int("run", "sde.seed", 0));

    ResultTable table;
    table.notes.push_back("sweep: " + path + " over " + std::to_string(values.size()) +
                          " values, mode " + inner_mode);
    for (std::size_t i = 0; i < values.size(); ++i) {
        ParsedConfig sub = cfg;
        sub.sections[section][key] = format_double(values[i]);
        sub.sections["run"]["mode"] = inner_mode;
        if (inner_mode == "simulate") {
            // Independent, reproducible seed per swept value.
            std::uint64_t state = base_seed ^ (0x9E3779B97F4A7C15ULL * (i + 1));
            state += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = state;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            z ^= z >> 31;
            sub.sections["run"]["sde.seed"] = std::to_string(z);
        }
        const ResultTable result = inner(sub);
        if (result.rows.empty()) {
            throw scenario_error("sweep inner run produced no rows");
        }
        if (table.columns.empty()) {
            table.columns.push_back(std::string("value (") + sweep_value_unit(path) + ")");
            for (const auto& c : result.columns) {
                table.columns.push_back(c);
            }
        }
        // One row per swept value: the final (largest-time) row of the run.
        std::vector<double> row{values[i]};
        for (double v : result.rows.back()) {
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ------------------------------------------------------------- serialisation

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

namespace {

std::string provenance_hash(const ParsedConfig& cfg) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(cfg.source_text)));
    return buf;
}

std::int64_t provenance_seed(const ParsedConfig& cfg) {
    return cfg.has("run", "sde.seed") ? cfg.get_int("run", "sde.seed") : 0;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
            out.push_back(c);
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace

void write_csv(std::ostream& out, const ResultTable& table, const ParsedConfig& cfg) {
    out << "# provenance: " << provenance_hash(cfg) << " " << provenance_seed(cfg) << " "
        << kToolVersion << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << table.columns[c];
    }
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_double(row[c]);
        }
        out << "\n";
    }
    for (const auto& note : table.notes) {
        out << "# " << note << "\n";
    }
}

void write_json(std::ostream& out, const ResultTable& table, const ParsedConfig& cfg) {
    out << "{\n  \"provenance\": {\"config_hash\": \"" << provenance_hash(cfg)
        << "\", \"seed\": " << provenance_seed(cfg) << ", \"version\": \"" << kToolVersion
        << "\"},\n";
    out << "  \"notes\": [";
    for (std::size_t i = 0; i < table.notes.size(); ++i) {
        out << (i ? ", " : "") << "\"" << json_escape(table.notes[i]) << "\"";
    }
    out << "],\n  \"columns\": [";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? ", " : "") << "\"" << json_escape(table.columns[c]) << "\"";
    }
    out << "],\n  \"rows\": [\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << "    [";
        for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
            const double v = table.rows[r][c];
            out << (c ? ", " : "");
            if (std::isnan(v)) {
                out << "null";
            } else {
                out << format_double(v);
            }
        }
        out << "]" << (r + 1 < table.rows.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
}

}  // namespace bmx
