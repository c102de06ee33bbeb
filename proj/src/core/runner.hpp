#pragma once

#include "core/config.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace bkl {

struct CheckOutcome {
    std::string name;
    double scalar; // the check's headline number (residual, min_gap, C_fit, ...)
    bool pass;
    nlohmann::json report;
};

struct RunOutput {
    std::filesystem::path dir;
    std::vector<CheckOutcome> outcomes;
    int failed;
};

// Validates, solves once, runs every requested check, and writes one JSON report per
// check plus a summary CSV into a directory named by the config's content hash under
// the output root (override argument, then BAKRYLAB_OUT, then output.dir). A failing
// check is recorded, not thrown; config problems throw ConfigError.
RunOutput run_config(const Config& cfg, const std::string& out_override = "");

struct SweepRow {
    double value;
    std::string check;
    double scalar;
    bool pass;
};

struct SweepOutput {
    std::filesystem::path csv_path;
    std::vector<SweepRow> rows;
    int failed;
};

// Reruns the config once per parameter value and aggregates every check scalar into one
// CSV (parameter_value, check, scalar, pass), sorted by (value, check).
SweepOutput sweep_config(const Config& cfg, const std::string& param,
                         const std::vector<double>& values,
                         const std::string& out_override = "");

} // namespace bkl
