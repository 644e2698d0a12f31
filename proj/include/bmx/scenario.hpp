#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace bmx {

// Parsed INI-style configuration: [section] headers with key = value lines.
// Keys may be dotted (e.g. sde.dt inside [run]).  Parsing is strict -- an
// unknown section, a duplicate key, or a malformed line raises config_error.
struct ParsedConfig {
    // section -> key -> raw string value
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string source_text;  // verbatim file content, hashed for provenance

    bool has(const std::string& section, const std::string& key) const;
    // Typed accessors; throw config_error naming the missing/invalid key.
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key) const;
};

ParsedConfig parse_config_file(const std::string& path);
ParsedConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

// Uniform tabular result: named columns, one row per output time (or per
// swept value).  Absent quantities are NaN, which serialises as "nan" in CSV
// and null in JSON.  `notes` are emitted as leading comment lines.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> notes;
};

// Subcommand drivers.  Each validates that run.mode matches the invoked
// subcommand, builds the physics objects from the config, runs the
// corresponding library operation over the requested time grid, and returns
// the table.  Errors surface as config_error / scenario_error /
// validity_error, which the CLI maps to exit codes 2 / 3 / 4.
ResultTable run_moments(const ParsedConfig& cfg);
ResultTable run_simulate(const ParsedConfig& cfg);
ResultTable run_pde(const ParsedConfig& cfg);
ResultTable run_rates(const ParsedConfig& cfg);
ResultTable run_sweep(const ParsedConfig& cfg);

// Serialisation.  Both writers emit the same numbers (printf %.17g); the
// leading provenance comment carries a 64-bit FNV-1a hash of the config
// text, the base seed, and the tool version so runs can be traced back to
// their exact inputs.
void write_csv(std::ostream& out, const ResultTable& table, const ParsedConfig& cfg);
void write_json(std::ostream& out, const ResultTable& table, const ParsedConfig& cfg);

std::uint64_t fnv1a64(const std::string& text);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace bmx
