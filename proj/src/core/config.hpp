#pragma once

#include "core/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bkl {

// Experiment description: one solve plus a list of named checks. Parsed from an
// INI-style text (sections, dotted keys, # or ; comments, quoted strings, comma lists).
struct Config {
    std::string space_kind = "euclidean";
    int dimension = 3;
    double parameter = 0.0;
    std::string warp_table; // path for custom spaces, relative to the config file

    double r_max = 8.0;
    int n = 129;

    double t0 = 0.0;
    double T = 1.0;
    double dt = 1e-3;

    double alpha = 1.0;
    std::string q_kind = "zero";
    double q_value = 0.0;
    double q_amplitude = 0.0;
    double q_center = 0.0;
    double q_width = 1.0;
    double q_rate = 0.0;
    std::string q_table; // path for tabulated sources

    std::string initial_kind = "constant";
    double initial_value = 1.0;
    double initial_amplitude = 1.0;
    double initial_center = 0.0;
    double initial_width = 1.0;
    double initial_base = 1.0;

    double R = 2.0;
    std::optional<double> D_override;
    double cutoff_a = 0.75;

    std::vector<std::string> checks;

    std::string output_dir = "out";
    std::optional<long> seed;

    std::filesystem::path base_dir;         // directory of the config file
    std::vector<std::string> unknown_keys;  // unrecognized paths, reported by validation
};

// Parse a config file / raw text. Grammar errors (bad lines, duplicate keys, malformed
// numbers) throw ParseError with line numbers; unknown keys are collected for
// validate_config instead.
Config parse_config_file(const std::filesystem::path& path);
Config parse_config_text(const std::string& text, const std::filesystem::path& base_dir);

// Semantic validation; returns "field.path: message" entries, empty when valid.
std::vector<std::string> validate_config(const Config& cfg);

// Canonical one-line-per-field rendering in fixed schema order; equal configs hash
// equal regardless of formatting in the source text.
std::string canonical_text(const Config& cfg);
std::uint64_t content_hash(const Config& cfg);
std::string content_hash_hex(const Config& cfg);

// Assign a numeric field addressed by its dotted path (sweep support). Integer-valued
// fields reject fractional values. Unknown paths throw ConfigError.
void set_numeric(Config& cfg, const std::string& path, double value);

ModelSpace make_space(const Config& cfg);
QProfile make_qprofile(const Config& cfg);
Field make_initial(const Config& cfg, const RadialGrid& grid);
PDEProblem make_problem(const Config& cfg);

} // namespace bkl
