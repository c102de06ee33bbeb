#include "core/runner.hpp"

#include "core/errors.hpp"
#include "core/estimates.hpp"
#include "core/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <optional>

namespace bkl {

namespace {

// Shared lazily computed pieces so several checks reuse one solve.
struct RunState {
    explicit RunState(const Config& cfg_) : cfg(cfg_) {}

    const PDEProblem& problem() {
        if (!problem_) problem_ = make_problem(cfg);
        return *problem_;
    }

    const SpaceTimeSolution& solution() {
        if (!solution_) solution_ = solve(problem());
        return *solution_;
    }

    const CylinderStats& stats() {
        if (!stats_) stats_ = cylinder_stats(solution(), cfg.R, cfg.D_override);
        return *stats_;
    }

    const FitResult& fit() {
        if (!fit_) fit_ = fit_constant(solution(), stats());
        return *fit_;
    }

    const Config& cfg;

private:
    std::optional<PDEProblem> problem_;
    std::optional<SpaceTimeSolution> solution_;
    std::optional<CylinderStats> stats_;
    std::optional<FitResult> fit_;
};

nlohmann::json grid_json(const Config& cfg, double dt) {
    return {{"n", cfg.n}, {"dt", dt}};
}

CheckOutcome check_bochner(RunState& st) {
    const PDEProblem& p = st.problem();
    const BochnerAudit audit = bochner_audit(p.space, p.grid, p.u0);
    const double dr = p.grid.dr();
    const double tol = 10.0 * dr * dr * audit.scale;
    const bool pass = audit.residual <= tol;
    return {"bochner", audit.residual, pass,
            {{"check", "bochner"},
             {"residual", audit.residual},
             {"scale", audit.scale},
             {"tolerances", {{"residual", tol}}},
             {"pass", pass},
             {"grid", grid_json(st.cfg, st.cfg.dt)}}};
}

CheckOutcome check_lemma21(RunState& st) {
    const GapReport rep = differential_inequality_gap(st.solution(), st.stats());
    return {"lemma21", rep.min_gap, rep.pass,
            {{"check", "lemma21"},
             {"min_gap", rep.min_gap},
             {"worst_point", {{"r", rep.worst_r}, {"t", rep.worst_s}}},
             {"tolerances", {{"gap", rep.tolerance}}},
             {"scale", rep.scale},
             {"checked", rep.checked},
             {"skipped", rep.skipped},
             {"pass", rep.pass},
             {"grid", grid_json(st.cfg, st.solution().dt_used())}}};
}

CheckOutcome check_theorem11(RunState& st) {
    const FitResult& fit = st.fit();
    return {"theorem11", fit.C_fit, true,
            {{"check", "theorem11"},
             {"case", alpha_case_name(alpha_case(st.cfg.alpha))},
             {"C_fit", fit.C_fit},
             {"worst_margin", 0.0},
             {"worst_point", {{"r", fit.worst_r}, {"t", fit.worst_s}}},
             {"pass", true},
             {"tolerances", nlohmann::json::object()},
             {"grid", grid_json(st.cfg, st.solution().dt_used())}}};
}

CheckOutcome check_harnack(RunState& st) {
    const SpaceTimeSolution& sol = st.solution();
    if (sol.frame_count() < 4)
        throw DomainError("harnack check needs at least 4 frames (T/dt >= 3)");
    const double C = st.fit().C_fit;
    const double dt = sol.dt_used();
    const double tol = 1e-8;
    HarnackResult worst{std::numeric_limits<double>::infinity(), 0, 0, 0, true};
    for (int k = 1; k <= 3; ++k) {
        const HarnackResult res = harnack_check(sol, st.stats(), C, k * dt, tol);
        if (res.worst_margin < worst.worst_margin) worst = res;
    }
    return {"harnack", worst.worst_margin, worst.pass,
            {{"check", "harnack"},
             {"case", alpha_case_name(alpha_case(st.cfg.alpha))},
             {"C_used", C},
             {"worst_margin", worst.worst_margin},
             {"worst_point",
              {{"rx", worst.worst_rx}, {"ry", worst.worst_ry}, {"t", worst.s}}},
             {"pass", worst.pass},
             {"tolerances", {{"margin", tol}}},
             {"grid", grid_json(st.cfg, dt)}}};
}

CheckOutcome check_comparison(RunState& st) {
    const ComparisonResult res = st.problem().space.comparison_check(st.cfg.R, 1024);
    return {"comparison", res.worst_margin, res.pass,
            {{"check", "comparison"},
             {"R", res.R},
             {"samples", res.samples},
             {"mu", res.mu},
             {"K", res.K},
             {"bound", res.bound},
             {"worst_margin", res.worst_margin},
             {"worst_point", {{"r", res.worst_r}}},
             {"pass", res.pass},
             {"tolerances", {{"margin", 1e-12}}}}};
}

CheckOutcome check_ode(RunState& st) {
    const Config& cfg = st.cfg;
    const double q_tilde = cfg.q_kind == "constant" ? cfg.q_value : 0.0;
    const double u0 = st.problem().u0[0];
    const OdeReport rep = ode_ancient_check(q_tilde, cfg.alpha, u0, 0.0, cfg.T);
    nlohmann::json report{{"check", "ode"},
                          {"q", q_tilde},
                          {"alpha", cfg.alpha},
                          {"u0", u0},
                          {"span", {{"begin", 0.0}, {"end", cfg.T}}},
                          {"deviation", rep.deviation},
                          {"u_end_numeric", rep.u_end_numeric},
                          {"u_end_closed", rep.u_end_closed},
                          {"pass", rep.pass},
                          {"tolerances", {{"deviation", 1e-8}}}};
    if (rep.has_t_star) report["t_star"] = rep.t_star;
    return {"ode", rep.deviation, rep.pass, report};
}

CheckOutcome check_liouville(RunState& st) {
    const DecaySweep sweep = liouville_decay_sweep(st.solution(), {2.0, 4.0, 8.0, 16.0});
    nlohmann::json rows = nlohmann::json::array();
    for (const DecayRow& row : sweep.rows)
        rows.push_back({{"R", row.R}, {"lhs", row.lhs}, {"bound", row.bound}});
    return {"liouville_sweep", sweep.exponent, sweep.pass,
            {{"check", "liouville_sweep"},
             {"rows", rows},
             {"exponent", sweep.exponent},
             {"decreasing", sweep.decreasing},
             {"pass", sweep.pass},
             {"tolerances", {{"exponent", {-0.6, -0.4}}}},
             {"grid", grid_json(st.cfg, st.solution().dt_used())}}};
}

CheckOutcome run_check(RunState& st, const std::string& name) {
    if (name == "bochner") return check_bochner(st);
    if (name == "lemma21") return check_lemma21(st);
    if (name == "theorem11") return check_theorem11(st);
    if (name == "harnack") return check_harnack(st);
    if (name == "comparison") return check_comparison(st);
    if (name == "ode") return check_ode(st);
    if (name == "liouville_sweep") return check_liouville(st);
    throw ConfigError("checks.list: unknown check \"" + name + "\"");
}

std::filesystem::path output_root(const Config& cfg, const std::string& out_override) {
    if (!out_override.empty()) return out_override;
    if (const char* env = std::getenv("BAKRYLAB_OUT"); env && *env) return env;
    return cfg.output_dir;
}

void require_valid(const Config& cfg) {
    const std::vector<std::string> problems = validate_config(cfg);
    if (problems.empty()) return;
    std::string joined = "invalid config";
    for (const std::string& p : problems) joined += "\n  " + p;
    throw ConfigError(joined);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

void log_timestamp(const std::filesystem::path& path, const std::string& what) {
    std::ofstream log(path, std::ios::app);
    if (!log) throw IoError("cannot write " + path.string());
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%d %H:%M:%S", std::localtime(&now));
    log << stamp << ' ' << what << '\n';
}

std::string scalar_csv(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

RunOutput run_config(const Config& cfg, const std::string& out_override) {
    require_valid(cfg);
    const std::filesystem::path dir = output_root(cfg, out_override) / content_hash_hex(cfg);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    log_timestamp(dir / "run.log", "run");

    RunState st(cfg);
    RunOutput out{dir, {}, 0};
    for (const std::string& name : cfg.checks) {
        CheckOutcome outcome{name, std::numeric_limits<double>::quiet_NaN(), false, {}};
        try {
            outcome = run_check(st, name);
        } catch (const std::exception& err) {
            outcome.report = {{"check", name}, {"error", err.what()}, {"pass", false}};
        }
        write_text(dir / (name + ".json"), outcome.report.dump(2) + "\n");
        if (!outcome.pass) ++out.failed;
        out.outcomes.push_back(std::move(outcome));
    }

    std::string csv = "check,scalar,pass\n";
    for (const CheckOutcome& outcome : out.outcomes)
        csv += outcome.name + "," + scalar_csv(outcome.scalar) + ","
               + (outcome.pass ? "true" : "false") + "\n";
    write_text(dir / "summary.csv", csv);
    return out;
}

SweepOutput sweep_config(const Config& cfg, const std::string& param,
                         const std::vector<double>& values,
                         const std::string& out_override) {
    require_valid(cfg);
    const std::filesystem::path root = output_root(cfg, out_override);

    SweepOutput out{{}, {}, 0};
    for (double value : values) {
        Config varied = cfg;
        set_numeric(varied, param, value);
        const RunOutput run = run_config(varied, out_override);
        for (const CheckOutcome& outcome : run.outcomes)
            out.rows.push_back({value, outcome.name, outcome.scalar, outcome.pass});
    }
    std::stable_sort(out.rows.begin(), out.rows.end(),
                     [](const SweepRow& a, const SweepRow& b) {
                         if (a.value != b.value) return a.value < b.value;
                         return a.check < b.check;
                     });

    std::string name = "sweep-" + param;
    std::replace(name.begin(), name.end(), '.', '-');
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) throw IoError("cannot create " + root.string() + ": " + ec.message());
    out.csv_path = root / (name + "-" + content_hash_hex(cfg) + ".csv");

    std::string csv = "parameter_value,check,scalar,pass\n";
    for (const SweepRow& row : out.rows) {
        csv += scalar_csv(row.value) + "," + row.check + "," + scalar_csv(row.scalar) + ","
               + (row.pass ? "true" : "false") + "\n";
        if (!row.pass) ++out.failed;
    }
    write_text(out.csv_path, csv);
    return out;
}

} // namespace bkl
