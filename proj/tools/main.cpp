#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "bmx/errors.hpp"
#include "bmx/scenario.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string output_path;  // empty = stdout
    std::string format = "csv";
    std::string seed;     // optional override of run sde.seed
    std::string threads;  // optional override of run sde.threads
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("-c,--config", opts.config_path, "INI-style run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("-o,--out,--output", opts.output_path, "Output file (default: stdout)");
    cmd->add_option("-f,--format", opts.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Override the configured RNG seed");
    cmd->add_option("--threads", opts.threads, "Override the configured worker thread count");
}

int run(const CommonOptions& opts, bmx::ResultTable (*driver)(const bmx::ParsedConfig&)) {
    bmx::ParsedConfig cfg = bmx::parse_config_file(opts.config_path);
    if (!opts.seed.empty()) {
        cfg.sections["run"]["sde.seed"] = opts.seed;
    }
    if (!opts.threads.empty()) {
        cfg.sections["run"]["sde.threads"] = opts.threads;
    }
    const bmx::ResultTable table = driver(cfg);

    std::ofstream file;
    if (!opts.output_path.empty()) {
        file.open(opts.output_path, std::ios::binary);
        if (!file) {
            throw bmx::config_error("cannot open output file: " + opts.output_path);
        }
    }
    std::ostream& out = opts.output_path.empty() ? std::cout : file;
    if (opts.format == "json") {
        bmx::write_json(out, table, cfg);
    } else {
        bmx::write_csv(out, table, cfg);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-Markovian Brownian motion toolkit: closed-form moments, Langevin "
                 "ensembles, Fokker-Planck densities and escape rates"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        bmx::ResultTable (*driver)(const bmx::ParsedConfig&);
    };
    const Sub subs[] = {
        {"moments", "Closed-form moments over a time grid", bmx::run_moments},
        {"simulate", "Monte Carlo Langevin ensemble statistics", bmx::run_simulate},
        {"pde", "Fokker-Planck density moments on a grid", bmx::run_pde},
        {"rates", "Barrier escape rates", bmx::run_rates},
        {"sweep", "Repeat a run over a swept parameter", bmx::run_sweep},
    };

    CommonOptions opts[5];
    for (std::size_t i = 0; i < 5; ++i) {
        add_common(app.add_subcommand(subs[i].name, subs[i].help), opts[i]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        for (std::size_t i = 0; i < 5; ++i) {
            if (app.get_subcommand(subs[i].name)->parsed()) {
                return run(opts[i], subs[i].driver);
            }
        }
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const bmx::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const bmx::scenario_error& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 3;
    } catch (const bmx::validity_error& e) {
        std::cerr << "validity error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
