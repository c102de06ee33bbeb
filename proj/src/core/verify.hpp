#pragma once

#include "core/estimates.hpp"
#include "core/solver.hpp"

#include <vector>

namespace bkl {

// Interior max residual of the weighted Bochner identity
// (1/2) Lap_f |grad u|^2 = |hess u|^2 + <grad Lap_f u, grad u> + Ric_f(grad u, grad u)
// for a radial field, two-node margin at both ends.
double bochner_residual(const ModelSpace& space, const RadialGrid& grid, const Field& u);

struct BochnerAudit {
    double residual; // max interior defect of the identity
    double scale;    // max interior sum of the four term magnitudes
};

BochnerAudit bochner_audit(const ModelSpace& space, const RadialGrid& grid, const Field& u);

struct GapReport {
    double min_gap;   // most negative LHS - RHS over checked points
    double worst_r;
    double worst_s;   // elapsed time of the minimizer
    double tolerance; // 10 (dr^2 + dt) scale
    double scale;     // max |LHS| + |RHS| over the evaluated frames
    long checked;
    long skipped;
    bool pass;
};

// Audits the differential inequality satisfied by w = |grad h|^2/(beta-h)^2:
// (Lap_f - d/dt) w  >=  2 [h+(1-beta)]/(beta-h) <grad h, grad w> + 2 (beta-h) w^2
//   - 2 (N-1) K w - 2 [alpha + h/(beta-h) + (1-beta)/(beta-h)] (D e^h)^(alpha-1) q w
//   - 2/(beta-h)^2 (D e^h)^(alpha-1) <grad h, grad q>,
// skipping a two-node spatial and one-frame temporal boundary layer. Passing means
// min(LHS - RHS) is above a discretization-aware negative tolerance.
GapReport differential_inequality_gap(const SpaceTimeSolution& solution,
                                      const CylinderStats& stats);

struct OdeReport {
    double deviation;     // max relative deviation of the integrator from the closed form
    bool pass;            // deviation <= 1e-8
    bool has_t_star;      // backward zero crossing exists (alpha > 1, q < 0)
    double t_star;
    double u_end_numeric;
    double u_end_closed;
};

// Integrates du/dt = q u^alpha with an adaptive fourth-order scheme from u(t_begin) = u0
// and compares against the closed form u^(1-alpha) = u0^(1-alpha) + (1-alpha) q (t-t_begin)
// (exponential for alpha = 1). A closed-form singularity inside the span is a domain
// error naming the critical time.
OdeReport ode_ancient_check(double q_tilde, double alpha, double u0, double t_begin,
                            double t_end);

struct DecayRow {
    double R;
    double lhs;   // |grad u|/u at the cylinder center, final frame (0 by symmetry)
    double bound; // sqrt((1+|mu|)/R) (beta_R + ln(D_R / u(0, end)))
};

struct DecaySweep {
    std::vector<DecayRow> rows;
    double exponent; // log-log least-squares slope of bound vs R
    bool decreasing; // bound strictly decreasing in R
    bool pass;       // decreasing and exponent in [-0.6, -0.4]
};

// Evaluates the gradient-estimate bound at the cylinder center for each R. Requires a
// curvature lower bound of exactly zero up to max R and a vanishing source; the bound
// must decay like R^(-1/2), the mechanism that forces sublinear ancient solutions to be
// constant.
DecaySweep liouville_decay_sweep(const SpaceTimeSolution& solution,
                                 const std::vector<double>& R_list);

} // namespace bkl
