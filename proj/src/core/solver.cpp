#include "core/solver.hpp"

#include "core/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace bkl {

namespace {

std::string fmt_time(double t) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", t);
    return buf;
}

// Crank-Nicolson factor theta for the implicit diffusion half.
constexpr double kTheta = 0.5;

struct Stepper {
    Stepper(const PDEProblem& p, double dt)
        : n(p.grid.n), dt(dt),
          g(edge_fluxes(p.space, p.grid)),
          m(node_weights(p.space, p.grid)),
          tri(neumann_tridiagonal(p.space, p.grid)),
          a_lo(n), a_di(n), a_up(n), scratch_c(n), scratch_d(n) {
        for (int i = 0; i < n; ++i) {
            a_lo[i] = -kTheta * dt * tri.lo[i];
            a_up[i] = -kTheta * dt * tri.up[i];
            a_di[i] = 1.0 - kTheta * dt * tri.di[i];
        }
        dr2 = p.grid.dr() * p.grid.dr();
        N = p.space.dimension();
    }

    // Flux-difference application of the diffusion operator; exactly zero on constants.
    void apply_operator(const Field& u, Field& out) const {
        out[0] = 2.0 * N * (u[1] - u[0]) / dr2;
        for (int i = 1; i < n - 1; ++i)
            out[i] = (g[i] * (u[i + 1] - u[i]) - g[i - 1] * (u[i] - u[i - 1])) / (m[i] * dr2);
        out[n - 1] = 2.0 * g[n - 2] * (u[n - 2] - u[n - 1]) / (m[n - 1] * dr2);
    }

    // Thomas solve of (I - theta dt L) x = rhs; rhs is overwritten with x.
    void implicit_solve(Field& rhs) {
        scratch_c[0] = a_up[0] / a_di[0];
        scratch_d[0] = rhs[0] / a_di[0];
        for (int i = 1; i < n; ++i) {
            const double denom = a_di[i] - a_lo[i] * scratch_c[i - 1];
            scratch_c[i] = a_up[i] / denom;
            scratch_d[i] = (rhs[i] - a_lo[i] * scratch_d[i - 1]) / denom;
        }
        rhs[n - 1] = scratch_d[n - 1];
        for (int i = n - 2; i >= 0; --i) rhs[i] = scratch_d[i] - scratch_c[i] * rhs[i + 1];
    }

    int n;
    double dt;
    std::vector<double> g, m;
    Tridiagonal tri;
    std::vector<double> a_lo, a_di, a_up;
    std::vector<double> scratch_c, scratch_d;
    double dr2;
    int N;
};

Field advance(const PDEProblem& p, Stepper& st, const Field& u, double s) {
    const int n = p.grid.n;
    Field lap(n);
    st.apply_operator(u, lap);
    Field next(n);
    const bool has_q = !p.q.is_zero();
    for (int i = 0; i < n; ++i) {
        double react = 0.0;
        if (has_q) react = p.q.value(p.grid.r(i), s) * std::pow(u[i], p.alpha);
        next[i] = u[i] + kTheta * st.dt * lap[i] + st.dt * react;
    }
    st.implicit_solve(next);
    for (int i = 0; i < n; ++i) {
        if (!(next[i] > 0.0))
            throw PositivityError("positivity lost at t = " + fmt_time(s + st.dt)
                                  + " (node r = " + fmt_time(p.grid.r(i)) + ")", s + st.dt);
    }
    return next;
}

SpaceTimeSolution solve_with_dt(const PDEProblem& p, double dt) {
    SpaceTimeSolution sol{{}, {}, p, {}};
    const long steps = static_cast<long>(std::ceil(p.T / dt - 1e-12));
    Stepper st(p, dt);
    sol.times.reserve(steps + 1);
    sol.frames.reserve(steps + 1);
    sol.times.push_back(0.0);
    sol.frames.push_back(p.u0);
    Field u = p.u0;
    for (long k = 0; k < steps; ++k) {
        u = advance(p, st, u, k * dt);
        sol.times.push_back((k + 1) * dt);
        sol.frames.push_back(u);
    }
    return sol;
}

} // namespace

QProfile QProfile::zero() { return QProfile(Kind::zero); }

QProfile QProfile::constant(double value) {
    QProfile q(Kind::constant);
    q.value_ = value;
    return q;
}

QProfile QProfile::gaussian_bump(double amplitude, double center, double width) {
    if (!(width > 0.0)) throw DomainError("bump width must be positive");
    QProfile q(Kind::gaussian_bump);
    q.amplitude_ = amplitude;
    q.center_ = center;
    q.width_ = width;
    return q;
}

QProfile QProfile::separable(double amplitude, double center, double width, double rate) {
    if (!(width > 0.0)) throw DomainError("bump width must be positive");
    QProfile q(Kind::separable);
    q.amplitude_ = amplitude;
    q.center_ = center;
    q.width_ = width;
    q.rate_ = rate;
    return q;
}

QProfile QProfile::tabulated(std::vector<double> r, std::vector<double> value) {
    if (r.size() != value.size() || r.size() < 2)
        throw DomainError("tabulated source needs matching r/value lists with >= 2 rows");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (r[i] <= r[i - 1]) throw DomainError("tabulated source needs strictly increasing r");
    QProfile q(Kind::tabulated);
    const std::size_t count = r.size();
    q.table_slope_.resize(count);
    q.table_slope_[0] = (value[1] - value[0]) / (r[1] - r[0]);
    for (std::size_t i = 1; i + 1 < count; ++i)
        q.table_slope_[i] = (value[i + 1] - value[i - 1]) / (r[i + 1] - r[i - 1]);
    q.table_slope_[count - 1] =
        (value[count - 1] - value[count - 2]) / (r[count - 1] - r[count - 2]);
    q.table_r_ = std::move(r);
    q.table_v_ = std::move(value);
    return q;
}

const char* QProfile::kind_name() const {
    switch (kind_) {
        case Kind::zero: return "zero";
        case Kind::constant: return "constant";
        case Kind::gaussian_bump: return "gaussian_bump";
        case Kind::separable: return "separable";
        case Kind::tabulated: return "tabulated";
    }
    return "unknown";
}

bool QProfile::is_zero() const {
    return kind_ == Kind::zero || (kind_ == Kind::constant && value_ == 0.0);
}

double QProfile::constant_value() const {
    if (kind_ == Kind::zero) return 0.0;
    if (kind_ == Kind::constant) return value_;
    throw DomainError("source profile is not constant");
}

namespace {

double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    std::size_t lo = 0, hi = xs.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (xs[mid] <= x) lo = mid; else hi = mid;
    }
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] * (1 - t) + ys[hi] * t;
}

} // namespace

double QProfile::value(double r, double t) const {
    switch (kind_) {
        case Kind::zero: return 0.0;
        case Kind::constant: return value_;
        case Kind::gaussian_bump: {
            const double z = (r - center_) / width_;
            return amplitude_ * std::exp(-z * z);
        }
        case Kind::separable: {
            const double z = (r - center_) / width_;
            return amplitude_ * std::exp(-z * z) * std::exp(rate_ * t);
        }
        case Kind::tabulated: return interp_linear(table_r_, table_v_, r);
    }
    return 0.0;
}

double QProfile::radial_derivative(double r, double t) const {
    switch (kind_) {
        case Kind::zero:
        case Kind::constant: return 0.0;
        case Kind::gaussian_bump:
        case Kind::separable: {
            const double z = (r - center_) / width_;
            return value(r, t) * (-2.0 * z / width_);
        }
        case Kind::tabulated: return interp_linear(table_r_, table_slope_, r);
    }
    return 0.0;
}

void PDEProblem::validate() const {
    if (static_cast<int>(u0.size()) != grid.n)
        throw DomainError("initial field size does not match the grid");
    for (int i = 0; i < grid.n; ++i)
        if (!(u0[i] > 0.0))
            throw DomainError("initial field must be strictly positive (node r = "
                              + fmt_time(grid.r(i)) + ")");
    if (!(T > 0.0)) throw DomainError("time horizon must be positive");
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (!(dt <= T)) throw DomainError("time step must not exceed the horizon");
}

Field step(const PDEProblem& problem, const Field& u, double s) {
    problem.validate();
    for (int i = 0; i < problem.grid.n; ++i)
        if (!(u[i] > 0.0)) throw DomainError("step input must be strictly positive");
    Stepper st(problem, problem.dt);
    return advance(problem, st, u, s);
}

SpaceTimeSolution solve(const PDEProblem& problem) {
    problem.validate();
    std::vector<double> history;
    double dt = problem.dt;
    for (int attempt = 0;; ++attempt) {
        history.push_back(dt);
        try {
            SpaceTimeSolution sol = solve_with_dt(problem, dt);
            sol.dt_history = history;
            return sol;
        } catch (const PositivityError& err) {
            if (attempt >= 10)
                throw PositivityError(std::string(err.what()) + " after 10 step halvings",
                                      err.time);
            dt *= 0.5;
        }
    }
}

double pde_residual(const SpaceTimeSolution& solution) {
    const int frames = solution.frame_count();
    if (frames < 3) throw DomainError("residual needs at least 3 frames");
    const PDEProblem& p = solution.problem;
    const int n = p.grid.n;
    const double dt = solution.times[1] - solution.times[0];
    const bool has_q = !p.q.is_zero();
    double worst = 0.0;
    for (int k = 1; k < frames - 1; ++k) {
        const Field lap = apply_weighted_laplacian(p.space, p.grid, solution.frames[k]);
        const Field& prev = solution.frames[k - 1];
        const Field& next = solution.frames[k + 1];
        const Field& cur = solution.frames[k];
        for (int i = 1; i < n - 1; ++i) {
            const double ut = (next[i] - prev[i]) / (2 * dt);
            double react = 0.0;
            if (has_q)
                react = p.q.value(p.grid.r(i), solution.times[k]) * std::pow(cur[i], p.alpha);
            worst = std::max(worst, std::abs(lap[i] - ut + react));
        }
    }
    return worst;
}

void archive(const SpaceTimeSolution& solution, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    char name[48];
    for (int k = 0; k < solution.frame_count(); ++k) {
        std::snprintf(name, sizeof name, "frame_%06d.csv", k);
        write_field_csv(dir / name, solution.problem.grid, solution.frames[k]);
    }
    const PDEProblem& p = solution.problem;
    nlohmann::json q{{"kind", p.q.kind_name()}};
    switch (p.q.kind()) {
        case QProfile::Kind::constant: q["value"] = p.q.constant_value(); break;
        case QProfile::Kind::separable: q["rate"] = p.q.rate(); [[fallthrough]];
        case QProfile::Kind::gaussian_bump:
            q["amplitude"] = p.q.amplitude();
            q["center"] = p.q.center();
            q["width"] = p.q.width();
            break;
        default: break;
    }
    nlohmann::json manifest{
        {"space", {{"kind", space_kind_name(p.space.kind())},
                   {"dimension", p.space.dimension()},
                   {"parameter", p.space.parameter()}}},
        {"grid", {{"r_max", p.grid.r_max}, {"n", p.grid.n}}},
        {"alpha", p.alpha},
        {"q", q},
        {"t0", p.t0},
        {"T", p.T},
        {"dt", solution.dt_used()},
        {"dt_history", solution.dt_history},
        {"times", solution.times},
        {"residual", solution.frame_count() >= 3 ? nlohmann::json(pde_residual(solution))
                                                 : nlohmann::json()},
    };
    std::ofstream out(dir / "manifest.json");
    if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + (dir / "manifest.json").string());
}

} // namespace bkl
