#include "bakrylab.h"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        const std::string token = text.substr(start, comma - start);
        start = comma + 1;
        const std::size_t a = token.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        const std::size_t b = token.find_last_not_of(" \t");
        const std::string body = token.substr(a, b - a + 1);
        char* end = nullptr;
        const double v = std::strtod(body.c_str(), &end);
        if (end == body.c_str() || *end != '\0')
            throw std::runtime_error("not a number: \"" + body + "\"");
        values.push_back(v);
    }
    return values;
}

struct ConfigHandle {
    bkl_config* ptr = nullptr;
    ~ConfigHandle() { bkl_config_destroy(ptr); }
};

int fail(const char* what) {
    std::fprintf(stderr, "%s: %s\n", what, bkl_last_error());
    return 2;
}

int load(const std::string& path, ConfigHandle& cfg) {
    if (bkl_config_load(path.c_str(), &cfg.ptr) != BKL_OK) return fail("cannot load config");
    return 0;
}

int do_validate(const std::string& path) {
    ConfigHandle cfg;
    if (int code = load(path, cfg)) return code;
    char problems[8192];
    const int count = bkl_config_validate(cfg.ptr, problems, sizeof problems);
    if (count < 0) return fail("validation error");
    if (count > 0) {
        std::fprintf(stderr, "invalid config (%d problem%s):\n%s\n", count,
                     count == 1 ? "" : "s", problems);
        return 2;
    }
    std::printf("ok\n");
    return 0;
}

int do_run(const std::string& path) {
    ConfigHandle cfg;
    if (int code = load(path, cfg)) return code;
    int failed = 0;
    char dir[4096];
    if (bkl_run(cfg.ptr, nullptr, &failed, dir, sizeof dir) != BKL_OK)
        return fail("run error");
    std::printf("reports: %s\n", dir);
    if (failed > 0) {
        std::printf("failed checks: %d\n", failed);
        return 1;
    }
    std::printf("all checks passed\n");
    return 0;
}

int do_sweep(const std::string& path, const std::string& param,
             const std::string& values_text) {
    ConfigHandle cfg;
    if (int code = load(path, cfg)) return code;
    std::vector<double> values;
    try {
        values = parse_values(values_text);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "bad --values: %s\n", e.what());
        return 2;
    }
    int failed = 0;
    char csv[4096];
    if (bkl_sweep(cfg.ptr, param.c_str(), values.data(), values.size(), nullptr, &failed,
                  csv, sizeof csv) != BKL_OK)
        return fail("sweep error");
    std::printf("sweep table: %s\n", csv);
    if (failed > 0) {
        std::printf("failed rows: %d\n", failed);
        return 1;
    }
    std::printf("all rows passed\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for gradient estimates of weighted parabolic"
                 " equations on rotationally symmetric spaces"};
    app.require_subcommand(1);

    std::string run_config, sweep_config, validate_config, param, values_text;

    CLI::App* run = app.add_subcommand("run", "solve a config and run its checks");
    run->add_option("config", run_config, "experiment config file")->required();

    CLI::App* sweep =
        app.add_subcommand("sweep", "rerun a config across values of one parameter");
    sweep->add_option("config", sweep_config, "experiment config file")->required();
    sweep->add_option("--param", param, "dotted numeric field, e.g. grid.n")->required();
    sweep->add_option("--values", values_text, "comma-separated values")->required();

    CLI::App* validate =
        app.add_subcommand("validate", "check a config without running anything");
    validate->add_option("config", validate_config, "experiment config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (run->parsed()) return do_run(run_config);
    if (sweep->parsed()) return do_sweep(sweep_config, param, values_text);
    return do_validate(validate_config);
}
