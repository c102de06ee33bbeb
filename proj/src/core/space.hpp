#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace bkl {

enum class SpaceKind { euclidean, hyperbolic, gaussian_soliton, custom };

const char* space_kind_name(SpaceKind kind);

// Sampled warp profile: records of (r, phi, phi', phi'') with strictly increasing r,
// starting at r = 0. Evaluation uses cubic Hermite interpolation for phi (from phi and
// phi'), cubic Hermite for phi' (from phi' and phi''), and linear interpolation for phi''.
struct WarpTable {
    std::vector<double> r, phi, dphi, ddphi;

    static WarpTable load(const std::filesystem::path& path);
    static WarpTable parse(const std::string& text, const std::string& origin);

    double r_last() const { return r.back(); }
    double eval_phi(double x) const;
    double eval_dphi(double x) const;
    double eval_ddphi(double x) const;

private:
    std::size_t interval(double x) const;
};

struct RicciEigenvalues {
    double radial;
    double tangential;
};

struct ComparisonResult {
    double mu;           // drift coefficient at r = 1
    double K;            // curvature lower-bound constant used
    double bound;        // mu + (N-1) K (R-1)
    double worst_margin; // min over samples of bound - drift(r)
    double worst_r;
    bool pass;           // worst_margin >= -1e-12
    int samples;
    double R;
};

// Rotationally symmetric weighted space: metric dr^2 + phi(r)^2 * (unit sphere), measure
// e^{-f} dv. Built-in kinds fix (phi, f) analytically; custom kinds interpolate a warp
// table and carry f = 0.
class ModelSpace {
public:
    static ModelSpace euclidean(int dimension);
    static ModelSpace hyperbolic(int dimension, double K);
    static ModelSpace gaussian_soliton(int dimension, double lambda);
    static ModelSpace custom(int dimension, WarpTable table);

    SpaceKind kind() const { return kind_; }
    int dimension() const { return dim_; }
    double parameter() const { return param_; }

    double phi(double r) const;
    double phi_p(double r) const;
    double phi_pp(double r) const;
    double f(double r) const;
    double f_p(double r) const;
    double f_pp(double r) const;

    // e^{-f(r)} phi(r)^{N-1}, the radial density of the weighted volume element.
    double weight(double r) const;

    // (N-1) phi'/phi - f', the first-order coefficient of the weighted Laplacian.
    double drift(double r) const;

    RicciEigenvalues ricci_eigenvalues(double r) const;

    // Largest K >= 0 with Ric_f >= -(N-1) K on (0, R], by dense sampling of both
    // eigenvalues, doubling the sample count until the result is stable to 1e-6.
    double ricci_lower_bound(double R) const;

    // Checks drift(r) <= mu + (N-1) K (R-1) on uniformly sampled r in [1, R].
    ComparisonResult comparison_check(double R, int samples) const;

private:
    ModelSpace(SpaceKind kind, int dimension, double param);
    void check_radius(double r) const;

    SpaceKind kind_;
    int dim_;
    double param_; // K for hyperbolic, lambda for gaussian_soliton, unused otherwise
    WarpTable table_;
};

} // namespace bkl
