#include "bakrylab.h"

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/runner.hpp"
#include "core/space.hpp"

#include <cstring>
#include <string>

struct bkl_space {
    bkl::ModelSpace impl;
};

struct bkl_config {
    bkl::Config impl;
};

namespace {

thread_local std::string g_last_error;

void copy_out(const std::string& text, char* buffer, size_t buffer_len) {
    if (!buffer || buffer_len == 0) return;
    const size_t count = std::min(text.size(), buffer_len - 1);
    std::memcpy(buffer, text.c_str(), count);
    buffer[count] = '\0';
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return BKL_OK;
    } catch (const bkl::ParseError& e) {
        g_last_error = e.what();
        return BKL_EPARSE;
    } catch (const bkl::IoError& e) {
        g_last_error = e.what();
        return BKL_EIO;
    } catch (const bkl::PositivityError& e) {
        g_last_error = e.what();
        return BKL_EPOSITIVITY;
    } catch (const bkl::HypothesisError& e) {
        g_last_error = e.what();
        return BKL_EHYPOTHESIS;
    } catch (const bkl::DomainError& e) {
        g_last_error = e.what();
        return BKL_EDOMAIN;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BKL_EINVAL;
    }
}

int einval(const char* message) {
    g_last_error = message;
    return BKL_EINVAL;
}

} // namespace

extern "C" {

const char* bkl_last_error(void) { return g_last_error.c_str(); }

int bkl_space_create(const char* kind, int dimension, double parameter, bkl_space** out) {
    if (!kind || !out) return einval("kind and out must not be NULL");
    return guarded([&] {
        const std::string name = kind;
        if (name == "euclidean")
            *out = new bkl_space{bkl::ModelSpace::euclidean(dimension)};
        else if (name == "hyperbolic")
            *out = new bkl_space{bkl::ModelSpace::hyperbolic(dimension, parameter)};
        else if (name == "gaussian_soliton")
            *out = new bkl_space{bkl::ModelSpace::gaussian_soliton(dimension, parameter)};
        else
            throw bkl::InvalidSpaceError("unknown space kind \"" + name + "\"");
    });
}

int bkl_space_create_custom(int dimension, const char* warp_table_path, bkl_space** out) {
    if (!warp_table_path || !out) return einval("path and out must not be NULL");
    return guarded([&] {
        *out = new bkl_space{
            bkl::ModelSpace::custom(dimension, bkl::WarpTable::load(warp_table_path))};
    });
}

void bkl_space_destroy(bkl_space* space) { delete space; }

int bkl_space_drift(const bkl_space* space, double r, double* out) {
    if (!space || !out) return einval("space and out must not be NULL");
    return guarded([&] { *out = space->impl.drift(r); });
}

int bkl_space_ricci_eigenvalues(const bkl_space* space, double r, double* radial,
                                double* tangential) {
    if (!space || !radial || !tangential)
        return einval("space and outputs must not be NULL");
    return guarded([&] {
        const bkl::RicciEigenvalues eigs = space->impl.ricci_eigenvalues(r);
        *radial = eigs.radial;
        *tangential = eigs.tangential;
    });
}

int bkl_space_ricci_lower_bound(const bkl_space* space, double R, double* out) {
    if (!space || !out) return einval("space and out must not be NULL");
    return guarded([&] { *out = space->impl.ricci_lower_bound(R); });
}

int bkl_space_comparison_check(const bkl_space* space, double R, int samples,
                               double* worst_margin, int* pass) {
    if (!space || !worst_margin || !pass)
        return einval("space and outputs must not be NULL");
    return guarded([&] {
        const bkl::ComparisonResult res = space->impl.comparison_check(R, samples);
        *worst_margin = res.worst_margin;
        *pass = res.pass ? 1 : 0;
    });
}

int bkl_config_load(const char* path, bkl_config** out) {
    if (!path || !out) return einval("path and out must not be NULL");
    return guarded([&] { *out = new bkl_config{bkl::parse_config_file(path)}; });
}

void bkl_config_destroy(bkl_config* config) { delete config; }

int bkl_config_validate(const bkl_config* config, char* buffer, size_t buffer_len) {
    if (!config) return einval("config must not be NULL");
    int count = 0;
    const int code = guarded([&] {
        const std::vector<std::string> problems = bkl::validate_config(config->impl);
        std::string joined;
        for (const std::string& p : problems) {
            if (!joined.empty()) joined += '\n';
            joined += p;
        }
        copy_out(joined, buffer, buffer_len);
        count = static_cast<int>(problems.size());
    });
    return code == BKL_OK ? count : -code;
}

int bkl_run(const bkl_config* config, const char* output_override, int* failed_checks,
            char* report_dir, size_t report_dir_len) {
    if (!config || !failed_checks) return einval("config and failed_checks must not be NULL");
    return guarded([&] {
        const bkl::RunOutput out =
            bkl::run_config(config->impl, output_override ? output_override : "");
        *failed_checks = out.failed;
        copy_out(out.dir.string(), report_dir, report_dir_len);
    });
}

int bkl_sweep(const bkl_config* config, const char* parameter, const double* values,
              size_t value_count, const char* output_override, int* failed_rows,
              char* csv_path, size_t csv_path_len) {
    if (!config || !parameter || !failed_rows)
        return einval("config, parameter and failed_rows must not be NULL");
    if (value_count > 0 && !values) return einval("values must not be NULL");
    return guarded([&] {
        const std::vector<double> list(values, values + value_count);
        const bkl::SweepOutput out = bkl::sweep_config(
            config->impl, parameter, list, output_override ? output_override : "");
        *failed_rows = out.failed;
        copy_out(out.csv_path.string(), csv_path, csv_path_len);
    });
}

} // extern "C"
