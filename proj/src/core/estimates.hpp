#pragma once

#include "core/solver.hpp"

#include <optional>
#include <vector>

namespace bkl {

// Nonlinearity regime selecting which bound (D or the cylinder infimum) feeds the source
// terms of the gradient estimate.
enum class AlphaCase { ge_one, between_zero_one, le_zero };

AlphaCase alpha_case(double alpha);
const char* alpha_case_name(AlphaCase c);

// Scalar data of the space-time cylinder (ball of radius R over the full time window)
// that every estimate consumes.
struct CylinderStats {
    double D;           // upper bound on u over the cylinder, default 1.05 * max
    double M_inf;       // infimum of u over the cylinder
    double beta;        // 1 + sup |ln(u/D)| over the half-radius cylinder
    double q_plus_norm; // sup of max(q, 0) over the cylinder
    double grad_q_norm; // sup of |dq/dr| over the cylinder
    double mu;          // drift of the distance function at r = 1
    double K;           // curvature lower-bound constant for the ball of radius R
    double R;
    double t0;
    double T;
};

// log_transform: h = ln(u/D), frame by frame. Requires 0 < u <= D everywhere.
std::vector<Field> log_transform(const SpaceTimeSolution& solution, double D);

// Max interior space-time residual of the equation h satisfies:
// Lap_f h - dh/dt + |grad h|^2 + q (D e^h)^(alpha-1).
double transformed_residual(const SpaceTimeSolution& solution, double D);

// w = |grad h|^2 / (beta - h)^2, one frame. Requires beta - h >= 1 pointwise.
Field compute_w(const RadialGrid& grid, const Field& h, double beta);

// Assembles the cylinder scalars for radius R; D may be overridden upward.
CylinderStats cylinder_stats(const SpaceTimeSolution& solution, double R,
                             std::optional<double> D_override = std::nullopt);

// The bracketed factor of the gradient estimate, evaluated at elapsed time s > 0 from
// the window start: sqrt((1+|mu|)/R) + 1/sqrt(s) + sqrt(K) + A + B with the source
// terms A, B selected by the alpha regime.
double estimate_bracket(double alpha, const CylinderStats& stats, double s);

struct FitResult {
    double C_fit;
    double worst_r;
    double worst_s;
};

// Smallest C with |grad u|/u <= C * bracket(s) * (beta + ln(D/u)) over the half-radius
// cylinder at s > 0; reported as the max of the pointwise ratios.
FitResult fit_constant(const SpaceTimeSolution& solution, const CylinderStats& stats);

struct CutoffConstants {
    double c_grad; // sup |dpsi/dr| * R / psi^a
    double c_hess; // sup |d2psi/dr2| * R^2 / psi^a
    double c_time; // sup |dpsi/dt| * (tau - (t0 - T)) / psi^(1/2)
};

// Separable space-time cutoff psi(r,t) = eta(r) xi(t): 1 on the inner half cylinder,
// 0 outside the ball of radius R and at the initial time slice, quintic-smoothstep
// ramps in between.
class Cutoff {
public:
    Cutoff(double R, double T, double t0, double tau, double a);

    double eta(double r) const;
    double eta_r(double r) const;
    double eta_rr(double r) const;
    double xi(double t) const;
    double xi_t(double t) const;

    double psi(double r, double t) const { return eta(r) * xi(t); }
    double psi_r(double r, double t) const { return eta_r(r) * xi(t); }
    double psi_rr(double r, double t) const { return eta_rr(r) * xi(t); }
    double psi_t(double r, double t) const { return eta(r) * xi_t(t); }

    // Derivative-to-power ratios maximized over a samples x samples grid of
    // [0,R] x [t0-T, tau]; points with psi = 0 contribute nothing.
    CutoffConstants measure(int samples = 512) const;

    double R, T, t0, tau, a;
};

Cutoff build_cutoff(double R, double T, double t0, double tau, double a);

// lambda = max{A, B} with the same source terms the bracket uses.
double harnack_lambda(double alpha, const CylinderStats& stats);

// Gamma = exp(-C (1/sqrt(s) + sqrt(K) + lambda) d), the comparison exponent between two
// points at geodesic distance d, elapsed time s > 0.
double harnack_gamma(double dist, double s, double alpha, const CylinderStats& stats,
                     double C);

struct HarnackResult {
    double worst_margin;
    double worst_rx;
    double worst_ry;
    double s;
    bool pass;
};

// Pairwise check of u(y) <= u(x)^Gamma (De)^(1-Gamma) over all node pairs of the frame
// at elapsed time s; distance between radii is |r_x - r_y| (a common ray through the
// pole realizes it, and the tighter of the two pair placements binds).
HarnackResult harnack_check(const SpaceTimeSolution& solution, const CylinderStats& stats,
                            double C, double s, double tol = 1e-8);

} // namespace bkl
