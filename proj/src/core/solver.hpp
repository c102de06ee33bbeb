#pragma once

#include "core/grid.hpp"
#include "core/space.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace bkl {

// Source profile q(r, t) with an analytic radial derivative (finite differences of the
// table for the tabulated kind).
class QProfile {
public:
    enum class Kind { zero, constant, gaussian_bump, separable, tabulated };

    static QProfile zero();
    static QProfile constant(double value);
    static QProfile gaussian_bump(double amplitude, double center, double width);
    // gaussian bump in r times exp(rate * t)
    static QProfile separable(double amplitude, double center, double width, double rate);
    static QProfile tabulated(std::vector<double> r, std::vector<double> value);

    Kind kind() const { return kind_; }
    const char* kind_name() const;
    bool is_zero() const;
    double constant_value() const;

    double value(double r, double t) const;
    double radial_derivative(double r, double t) const;

    double amplitude() const { return amplitude_; }
    double center() const { return center_; }
    double width() const { return width_; }
    double rate() const { return rate_; }

private:
    explicit QProfile(Kind kind) : kind_(kind) {}

    Kind kind_;
    double value_ = 0.0;
    double amplitude_ = 0.0, center_ = 0.0, width_ = 1.0, rate_ = 0.0;
    std::vector<double> table_r_, table_v_, table_slope_;
};

struct PDEProblem {
    ModelSpace space;
    RadialGrid grid;
    double alpha = 1.0;
    QProfile q = QProfile::zero();
    Field u0;
    double t0 = 0.0; // end of the time window [t0 - T, t0]
    double T = 1.0;  // window length; integration runs over elapsed time s in [0, T]
    double dt = 1e-3;

    void validate() const;
};

struct SpaceTimeSolution {
    std::vector<double> times; // elapsed time stamps, times[0] = 0
    std::vector<Field> frames;
    PDEProblem problem;
    std::vector<double> dt_history; // every attempted step size, last one is the used dt

    double dt_used() const { return dt_history.back(); }
    int frame_count() const { return static_cast<int>(frames.size()); }
};

// One IMEX step at elapsed time s: the diffusion term advances implicitly through a
// tridiagonal solve, the reaction q u^alpha explicitly. Homogeneous Neumann rows close
// both ends. Throws PositivityError instead of clamping.
Field step(const PDEProblem& problem, const Field& u, double s);

// ceil(T/dt) steps of `step`, recording every frame. On positivity loss the step size is
// halved (up to 10 times) and the integration restarts from u0.
SpaceTimeSolution solve(const PDEProblem& problem);

// Max over interior space-time points of |Lap_f u - du/dt + q u^alpha| with centered time
// differences.
double pde_residual(const SpaceTimeSolution& solution);

// Directory of per-frame CSV snapshots plus manifest.json (parameters, times, dt history,
// residual summary).
void archive(const SpaceTimeSolution& solution, const std::filesystem::path& dir);

} // namespace bkl
