#include "core/verify.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace bkl {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

BochnerAudit bochner_terms(const ModelSpace& space, const RadialGrid& grid, const Field& u,
                           bool want_scale) {
    if (static_cast<int>(u.size()) != grid.n) throw DomainError("field size mismatch");
    const int n = grid.n;
    const double dr = grid.dr();
    const Field gu = radial_gradient(grid, u);
    Field G(n);
    for (int i = 0; i < n; ++i) G[i] = gu[i] * gu[i];
    const Field lapG = apply_weighted_laplacian(space, grid, G);
    const Field lapu = apply_weighted_laplacian(space, grid, u);
    const Field glap = radial_gradient(grid, lapu);

    BochnerAudit audit{0.0, 0.0};
    for (int i = 2; i < n - 2; ++i) {
        const double r = grid.r(i);
        const double upp = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dr * dr);
        const double ratio = space.phi_p(r) / space.phi(r);
        const double hess2 = upp * upp
                             + (space.dimension() - 1) * (ratio * gu[i]) * (ratio * gu[i]);
        const double cross = glap[i] * gu[i];
        const double ric = space.ricci_eigenvalues(r).radial * G[i];
        audit.residual = std::max(audit.residual,
                                  std::abs(0.5 * lapG[i] - hess2 - cross - ric));
        if (want_scale)
            audit.scale = std::max(audit.scale, std::abs(0.5 * lapG[i]) + std::abs(hess2)
                                                    + std::abs(cross) + std::abs(ric));
    }
    return audit;
}

} // namespace

double bochner_residual(const ModelSpace& space, const RadialGrid& grid, const Field& u) {
    return bochner_terms(space, grid, u, false).residual;
}

BochnerAudit bochner_audit(const ModelSpace& space, const RadialGrid& grid, const Field& u) {
    return bochner_terms(space, grid, u, true);
}

GapReport differential_inequality_gap(const SpaceTimeSolution& solution,
                                      const CylinderStats& stats) {
    const PDEProblem& p = solution.problem;
    const RadialGrid& grid = p.grid;
    const int n = grid.n;
    const int frames = solution.frame_count();
    if (frames < 3) throw DomainError("gap audit needs at least 3 frames");
    const double dt = solution.times[1] - solution.times[0];
    const double dr = grid.dr();
    const double beta = stats.beta;
    const double K = stats.K;
    const double alpha = p.alpha;
    const int N = p.space.dimension();
    const bool has_q = !p.q.is_zero();

    const std::vector<Field> h = log_transform(solution, stats.D);
    std::vector<Field> w(frames);
    for (int k = 0; k < frames; ++k) w[k] = compute_w(grid, h[k], beta);

    GapReport rep{std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0, 0.0,
                  0, 0, false};
    for (int k = 1; k < frames - 1; ++k) {
        const double s = solution.times[k];
        const Field lapw = apply_weighted_laplacian(p.space, grid, w[k]);
        const Field gh = radial_gradient(grid, h[k]);
        const Field gw = radial_gradient(grid, w[k]);
        for (int i = 0; i < n; ++i) {
            const double wt = (w[k + 1][i] - w[k - 1][i]) / (2 * dt);
            const double lhs = lapw[i] - wt;
            const double bh = beta - h[k][i];
            double rhs = 2.0 * (h[k][i] + (1.0 - beta)) / bh * (gh[i] * gw[i])
                         + 2.0 * bh * w[k][i] * w[k][i] - 2.0 * (N - 1) * K * w[k][i];
            if (has_q) {
                const double r = grid.r(i);
                const double upow = std::pow(stats.D * std::exp(h[k][i]), alpha - 1.0);
                rhs -= 2.0 * (alpha + h[k][i] / bh + (1.0 - beta) / bh) * upow
                       * p.q.value(r, s) * w[k][i];
                rhs -= 2.0 / (bh * bh) * upow * gh[i] * p.q.radial_derivative(r, s);
            }
            rep.scale = std::max(rep.scale, std::abs(lhs) + std::abs(rhs));
            if (i < 2 || i >= n - 2) continue;
            const double gap = lhs - rhs;
            ++rep.checked;
            if (gap < rep.min_gap) {
                rep.min_gap = gap;
                rep.worst_r = grid.r(i);
                rep.worst_s = s;
            }
        }
    }
    rep.skipped = static_cast<long>(frames) * n - rep.checked;
    rep.tolerance = 10.0 * (dr * dr + dt) * rep.scale;
    rep.pass = rep.min_gap >= -rep.tolerance;
    return rep;
}

namespace {

double ode_closed(double q, double alpha, double u0, double dt_from_begin) {
    if (q == 0.0) return u0;
    if (alpha == 1.0) return u0 * std::exp(q * dt_from_begin);
    const double z = std::pow(u0, 1.0 - alpha) + (1.0 - alpha) * q * dt_from_begin;
    return std::pow(z, 1.0 / (1.0 - alpha));
}

double ode_rk4(double q, double alpha, double u, double h) {
    auto f = [&](double v) { return q * std::pow(v, alpha); };
    const double k1 = f(u);
    const double k2 = f(u + 0.5 * h * k1);
    const double k3 = f(u + 0.5 * h * k2);
    const double k4 = f(u + h * k3);
    return u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

OdeReport ode_ancient_check(double q_tilde, double alpha, double u0, double t_begin,
                            double t_end) {
    if (!(u0 > 0.0)) throw DomainError("initial value must be positive");
    if (!(t_end > t_begin)) throw DomainError("time span must be increasing");
    const double span = t_end - t_begin;

    OdeReport rep{0.0, false, false, 0.0, u0, u0};
    if (q_tilde != 0.0 && alpha != 1.0) {
        // u^(1-alpha) crosses zero at this offset from t_begin (either direction)
        const double offset = std::pow(u0, 1.0 - alpha) / ((alpha - 1.0) * q_tilde);
        if (offset > 0.0 && offset <= span)
            throw DomainError("closed form is singular at t* = " + fmt(t_begin + offset)
                              + " inside the requested span");
        if (alpha > 1.0 && q_tilde < 0.0) {
            rep.has_t_star = true;
            rep.t_star = t_begin + offset;
        }
    }

    const double rtol = 1e-12, atol = 1e-14;
    double t = 0.0;
    double u = u0;
    double h = span / 100.0;
    while (t < span) {
        if (h < span * 1e-15) throw DomainError("integrator step size underflow");
        if (t + h > span) h = span - t;
        const double big = ode_rk4(q_tilde, alpha, u, h);
        const double half = ode_rk4(q_tilde, alpha, u, 0.5 * h);
        const double small = ode_rk4(q_tilde, alpha, half, 0.5 * h);
        const double err = std::abs(small - big) / 15.0;
        const double tol = rtol * std::abs(small) + atol;
        if (err <= tol) {
            t += h;
            u = small + (small - big) / 15.0;
            const double exact = ode_closed(q_tilde, alpha, u0, t);
            rep.deviation = std::max(rep.deviation,
                                     std::abs(u - exact) / std::max(std::abs(exact), atol));
        }
        const double factor = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 4.0;
        h *= std::clamp(factor, 0.1, 4.0);
    }
    rep.u_end_numeric = u;
    rep.u_end_closed = ode_closed(q_tilde, alpha, u0, span);
    rep.pass = rep.deviation <= 1e-8;
    return rep;
}

DecaySweep liouville_decay_sweep(const SpaceTimeSolution& solution,
                                 const std::vector<double>& R_list) {
    if (R_list.empty()) throw DomainError("sweep needs at least one radius");
    const PDEProblem& p = solution.problem;
    if (!p.q.is_zero())
        throw HypothesisError("decay sweep requires a vanishing source (q is "
                              + std::string(p.q.kind_name()) + ")");
    const double maxR = *std::max_element(R_list.begin(), R_list.end());
    const double K = p.space.ricci_lower_bound(maxR);
    if (K != 0.0)
        throw HypothesisError("decay sweep requires a flat curvature lower bound, got K = "
                              + fmt(K));

    const Field& last = solution.frames.back();
    const double lhs = std::abs(radial_gradient(p.grid, last)[0]) / last[0];

    DecaySweep sweep;
    for (double R : R_list) {
        const CylinderStats stats = cylinder_stats(solution, R);
        const double bound = std::sqrt((1.0 + std::abs(stats.mu)) / R)
                             * (stats.beta + std::log(stats.D / last[0]));
        sweep.rows.push_back({R, lhs, bound});
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int count = static_cast<int>(sweep.rows.size());
    for (const DecayRow& row : sweep.rows) {
        const double x = std::log(row.R), y = std::log(row.bound);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double denom = count * sxx - sx * sx;
    sweep.exponent = denom != 0.0 ? (count * sxy - sx * sy) / denom
                                  : std::numeric_limits<double>::quiet_NaN();
    sweep.decreasing = true;
    for (int i = 1; i < count; ++i)
        if (!(sweep.rows[i].bound < sweep.rows[i - 1].bound)) sweep.decreasing = false;
    sweep.pass = sweep.decreasing && sweep.exponent >= -0.6 && sweep.exponent <= -0.4;
    return sweep;
}

} // namespace bkl
