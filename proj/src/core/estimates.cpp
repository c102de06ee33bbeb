#include "core/estimates.hpp"

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

// quintic smoothstep and derivatives: C^2, s(0)=0, s(1)=1, s'=s''=0 at both ends
double smoothstep(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return ((6.0 * x - 15.0) * x + 10.0) * x * x * x;
}

double smoothstep_p(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return ((30.0 * x - 60.0) * x + 30.0) * x * x;
}

double smoothstep_pp(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return ((120.0 * x - 180.0) * x + 60.0) * x;
}

// source terms of the bracket: A from q+, B from grad q, base selected by regime
void source_terms(double alpha, const CylinderStats& stats, double& A, double& B) {
    const AlphaCase c = alpha_case(alpha);
    const double base = (c == AlphaCase::ge_one) ? stats.D : stats.M_inf;
    if (!(base > 0.0)) throw HypothesisError("cylinder bound must be positive");
    A = std::pow(base, 0.5 * (alpha - 1.0)) * std::sqrt(stats.q_plus_norm);
    if (c != AlphaCase::le_zero) A *= std::sqrt(alpha);
    B = std::pow(base, (alpha - 1.0) / 3.0) * std::cbrt(stats.grad_q_norm);
}

double elapsed_or_throw(double s) {
    if (!(s > 0.0))
        throw DomainError("estimate clock excludes the initial slice (elapsed time "
                          + fmt(s) + " must be positive)");
    return s;
}

} // namespace

AlphaCase alpha_case(double alpha) {
    if (alpha >= 1.0) return AlphaCase::ge_one;
    if (alpha > 0.0) return AlphaCase::between_zero_one;
    return AlphaCase::le_zero;
}

const char* alpha_case_name(AlphaCase c) {
    switch (c) {
        case AlphaCase::ge_one: return "alpha>=1";
        case AlphaCase::between_zero_one: return "0<alpha<1";
        case AlphaCase::le_zero: return "alpha<=0";
    }
    return "unknown";
}

std::vector<Field> log_transform(const SpaceTimeSolution& solution, double D) {
    if (!(D > 0.0)) throw HypothesisError("upper bound D must be positive");
    const RadialGrid& grid = solution.problem.grid;
    std::vector<Field> h(solution.frames.size(), Field(grid.n));
    for (std::size_t k = 0; k < solution.frames.size(); ++k) {
        for (int i = 0; i < grid.n; ++i) {
            const double u = solution.frames[k][i];
            if (!(u > 0.0))
                throw HypothesisError("solution not positive at r = " + fmt(grid.r(i))
                                      + ", elapsed t = " + fmt(solution.times[k]));
            if (u > D)
                throw HypothesisError("solution exceeds its upper bound D at r = "
                                      + fmt(grid.r(i)) + ", elapsed t = "
                                      + fmt(solution.times[k]) + " (u = " + fmt(u)
                                      + ", D = " + fmt(D) + ")");
            h[k][i] = std::log(u / D);
        }
    }
    return h;
}

double transformed_residual(const SpaceTimeSolution& solution, double D) {
    if (solution.frame_count() < 3) throw DomainError("residual needs at least 3 frames");
    const std::vector<Field> h = log_transform(solution, D);
    const PDEProblem& p = solution.problem;
    const RadialGrid& grid = p.grid;
    const double dt = solution.times[1] - solution.times[0];
    const bool has_q = !p.q.is_zero();
    double worst = 0.0;
    for (int k = 1; k + 1 < solution.frame_count(); ++k) {
        const Field lap = apply_weighted_laplacian(p.space, grid, h[k]);
        const Field grad = radial_gradient(grid, h[k]);
        for (int i = 1; i < grid.n - 1; ++i) {
            const double ht = (h[k + 1][i] - h[k - 1][i]) / (2 * dt);
            double react = 0.0;
            if (has_q)
                react = p.q.value(grid.r(i), solution.times[k])
                        * std::pow(D * std::exp(h[k][i]), p.alpha - 1.0);
            worst = std::max(worst, std::abs(lap[i] - ht + grad[i] * grad[i] + react));
        }
    }
    return worst;
}

Field compute_w(const RadialGrid& grid, const Field& h, double beta) {
    if (static_cast<int>(h.size()) != grid.n) throw DomainError("field size mismatch");
    const Field grad = radial_gradient(grid, h);
    Field w(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        const double denom = beta - h[i];
        if (denom < 1.0 - 1e-12)
            throw HypothesisError("cylinder stats inconsistent: beta - h = " + fmt(denom)
                                  + " < 1 at r = " + fmt(grid.r(i)));
        w[i] = grad[i] * grad[i] / (denom * denom);
    }
    return w;
}

CylinderStats cylinder_stats(const SpaceTimeSolution& solution, double R,
                             std::optional<double> D_override) {
    const PDEProblem& p = solution.problem;
    const RadialGrid& grid = p.grid;
    if (!(R > 0.0)) throw DomainError("cylinder radius must be positive");
    if (R > grid.r_max / 2 + 1e-12)
        throw DomainError("cylinder radius R = " + fmt(R)
                          + " exceeds half the grid extent " + fmt(grid.r_max / 2));
    if (solution.frames.empty()) throw DomainError("solution has no frames");

    int ball = 0, half = 0;
    while (ball + 1 < grid.n && grid.r(ball + 1) <= R + 1e-12) ++ball;
    while (half + 1 < grid.n && grid.r(half + 1) <= R / 2 + 1e-12) ++half;

    double umax = 0.0, umin = std::numeric_limits<double>::infinity();
    for (const Field& frame : solution.frames)
        for (int i = 0; i <= ball; ++i) {
            umax = std::max(umax, frame[i]);
            umin = std::min(umin, frame[i]);
        }
    if (!(umin > 0.0)) throw HypothesisError("solution not positive on the cylinder");

    double D = 1.05 * umax;
    if (D_override) {
        if (*D_override < umax)
            throw HypothesisError("supplied D = " + fmt(*D_override)
                                  + " is below the cylinder max " + fmt(umax));
        D = *D_override;
    }

    double habs = 0.0;
    for (const Field& frame : solution.frames)
        for (int i = 0; i <= half; ++i)
            habs = std::max(habs, std::abs(std::log(frame[i] / D)));

    double qp = 0.0, gq = 0.0;
    if (!p.q.is_zero())
        for (double t : solution.times)
            for (int i = 0; i <= ball; ++i) {
                qp = std::max(qp, std::max(p.q.value(grid.r(i), t), 0.0));
                gq = std::max(gq, std::abs(p.q.radial_derivative(grid.r(i), t)));
            }

    CylinderStats stats;
    stats.D = D;
    stats.M_inf = umin;
    stats.beta = 1.0 + habs;
    stats.q_plus_norm = qp;
    stats.grad_q_norm = gq;
    stats.mu = p.space.drift(1.0);
    stats.K = p.space.ricci_lower_bound(R);
    stats.R = R;
    stats.t0 = p.t0;
    stats.T = p.T;
    return stats;
}

double estimate_bracket(double alpha, const CylinderStats& stats, double s) {
    elapsed_or_throw(s);
    double A, B;
    source_terms(alpha, stats, A, B);
    return std::sqrt((1.0 + std::abs(stats.mu)) / stats.R) + 1.0 / std::sqrt(s)
           + std::sqrt(stats.K) + A + B;
}

FitResult fit_constant(const SpaceTimeSolution& solution, const CylinderStats& stats) {
    const PDEProblem& p = solution.problem;
    const RadialGrid& grid = p.grid;
    const std::vector<Field> h = log_transform(solution, stats.D);
    int half = 0;
    while (half + 1 < grid.n && grid.r(half + 1) <= stats.R / 2 + 1e-12) ++half;

    FitResult fit{0.0, 0.0, 0.0};
    for (int k = 1; k < solution.frame_count(); ++k) {
        const double s = solution.times[k];
        const double br = estimate_bracket(p.alpha, stats, s);
        const Field grad = radial_gradient(grid, solution.frames[k]);
        for (int i = 0; i <= half; ++i) {
            const double denom = br * (stats.beta - h[k][i]);
            const double ratio = std::abs(grad[i]) / solution.frames[k][i] / denom;
            if (ratio > fit.C_fit) {
                fit.C_fit = ratio;
                fit.worst_r = grid.r(i);
                fit.worst_s = s;
            }
        }
    }
    return fit;
}

Cutoff::Cutoff(double R_, double T_, double t0_, double tau_, double a_)
    : R(R_), T(T_), t0(t0_), tau(tau_), a(a_) {
    if (!(R >= 2.0)) throw DomainError("cutoff radius must be at least 2");
    if (!(T > 0.0)) throw DomainError("cutoff window length must be positive");
    if (!(tau > t0 - T && tau <= t0))
        throw DomainError("cutoff time tau = " + fmt(tau) + " must lie in ("
                          + fmt(t0 - T) + ", " + fmt(t0) + "]");
    if (!(a > 0.0 && a < 1.0))
        throw DomainError("cutoff exponent must lie in (0, 1)");
}

double Cutoff::eta(double r) const {
    if (r <= R / 2) return 1.0;
    if (r >= R) return 0.0;
    return smoothstep(2.0 - 2.0 * r / R);
}

double Cutoff::eta_r(double r) const {
    if (r <= R / 2 || r >= R) return 0.0;
    return smoothstep_p(2.0 - 2.0 * r / R) * (-2.0 / R);
}

double Cutoff::eta_rr(double r) const {
    if (r <= R / 2 || r >= R) return 0.0;
    return smoothstep_pp(2.0 - 2.0 * r / R) * (4.0 / (R * R));
}

double Cutoff::xi(double t) const {
    if (t <= t0 - T) return 0.0;
    if (t >= t0 - T / 2) return 1.0;
    return smoothstep(2.0 * (t - (t0 - T)) / T);
}

double Cutoff::xi_t(double t) const {
    if (t <= t0 - T || t >= t0 - T / 2) return 0.0;
    return smoothstep_p(2.0 * (t - (t0 - T)) / T) * (2.0 / T);
}

CutoffConstants Cutoff::measure(int samples) const {
    if (samples < 2) throw DomainError("cutoff measurement needs at least 2 samples");
    CutoffConstants c{0.0, 0.0, 0.0};
    const double span = tau - (t0 - T);
    for (int i = 0; i < samples; ++i) {
        const double r = R * i / (samples - 1);
        for (int j = 0; j < samples; ++j) {
            const double t = (t0 - T) + span * j / (samples - 1);
            const double v = psi(r, t);
            if (!(v > 0.0)) continue;
            const double pa = std::pow(v, a);
            c.c_grad = std::max(c.c_grad, std::abs(psi_r(r, t)) * R / pa);
            c.c_hess = std::max(c.c_hess, std::abs(psi_rr(r, t)) * R * R / pa);
            c.c_time = std::max(c.c_time, std::abs(psi_t(r, t)) * span / std::sqrt(v));
        }
    }
    return c;
}

Cutoff build_cutoff(double R, double T, double t0, double tau, double a) {
    return Cutoff(R, T, t0, tau, a);
}

double harnack_lambda(double alpha, const CylinderStats& stats) {
    double A, B;
    source_terms(alpha, stats, A, B);
    return std::max(A, B);
}

double harnack_gamma(double dist, double s, double alpha, const CylinderStats& stats,
                     double C) {
    elapsed_or_throw(s);
    if (dist < 0.0) throw DomainError("distance must be nonnegative");
    if (C < 0.0) throw DomainError("comparison constant must be nonnegative");
    const double rate = 1.0 / std::sqrt(s) + std::sqrt(stats.K) + harnack_lambda(alpha, stats);
    return std::exp(-C * rate * dist);
}

HarnackResult harnack_check(const SpaceTimeSolution& solution, const CylinderStats& stats,
                            double C, double s, double tol) {
    const RadialGrid& grid = solution.problem.grid;
    const double dt = solution.dt_used();
    const long k = std::lround(s / dt);
    if (k < 0 || k >= solution.frame_count()
        || std::abs(solution.times[k] - s) > 1e-9 * std::max(1.0, std::abs(s)))
        throw DomainError("no stored frame at elapsed time " + fmt(s));
    const Field& u = solution.frames[k];

    for (int i = 0; i < grid.n; ++i)
        if (u[i] > stats.D)
            throw HypothesisError("solution exceeds its upper bound D at r = "
                                  + fmt(grid.r(i)) + ", elapsed t = " + fmt(s));

    const double rate = 1.0 / std::sqrt(elapsed_or_throw(s)) + std::sqrt(stats.K)
                        + harnack_lambda(solution.problem.alpha, stats);
    const double De = stats.D * std::exp(1.0);
    // Gamma depends only on |i - j|; tabulate it and the (De)^(1-Gamma) factor once.
    std::vector<double> gamma(grid.n), defac(grid.n);
    for (int m = 0; m < grid.n; ++m) {
        gamma[m] = std::exp(-C * rate * m * grid.dr());
        defac[m] = std::pow(De, 1.0 - gamma[m]);
    }

    HarnackResult res{std::numeric_limits<double>::infinity(), 0.0, 0.0, s, false};
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j) {
            const int m = std::abs(i - j);
            const double margin = std::pow(u[i], gamma[m]) * defac[m] - u[j];
            if (margin < res.worst_margin) {
                res.worst_margin = margin;
                res.worst_rx = grid.r(i);
                res.worst_ry = grid.r(j);
            }
        }
    res.pass = res.worst_margin >= -tol;
    return res;
}

} // namespace bkl
