#pragma once

#include "core/space.hpp"

#include <filesystem>
#include <vector>

namespace bkl {

using Field = std::vector<double>;

// Uniform node set r_i = i * dr on [0, r_max].
struct RadialGrid {
    RadialGrid(double r_max_, int n_);

    double r_max;
    int n;

    double dr() const { return r_max / (n - 1); }
    double r(int i) const { return i * dr(); }
    std::vector<double> nodes() const;
};

enum class OuterStencil {
    onesided, // diagnostic: one-sided second-order row at the outer node
    neumann,  // reflecting half-cell row (zero outer flux)
};

// Edge conductances g_{i+1/2}, i = 0..n-2, for the flux form of the weighted Laplacian.
// The coefficients divide exactly-summed power sums so that the operator is symmetric in
// the weighted trapezoid inner product and exact on r^2 in the unweighted flat case; the
// first edge vanishes, which decouples the pole row.
std::vector<double> edge_fluxes(const ModelSpace& space, const RadialGrid& grid);

// Node weights m_i = e^{-f(r_i)} phi(r_i)^{N-1} (m_0 = 0).
std::vector<double> node_weights(const ModelSpace& space, const RadialGrid& grid);

// Weighted Laplacian of a radial field. Pole row: 2N (u_1 - u_0)/dr^2. Interior rows:
// flux differences. Outer row per OuterStencil.
Field apply_weighted_laplacian(const ModelSpace& space, const RadialGrid& grid,
                               const Field& u, OuterStencil outer = OuterStencil::onesided);

// Centered radial derivative; 0 at the pole (radial symmetry), one-sided second order at
// the outer node.
Field radial_gradient(const RadialGrid& grid, const Field& u);

// Trapezoid quadrature of u * v against the weighted volume density.
double weighted_inner(const ModelSpace& space, const RadialGrid& grid,
                      const Field& u, const Field& v);

// Tridiagonal matrix of the neumann-variant operator, as diagonals (lo, di, up).
struct Tridiagonal {
    std::vector<double> lo, di, up;
};
Tridiagonal neumann_tridiagonal(const ModelSpace& space, const RadialGrid& grid);

// CSV snapshot with header "r,value", one node per row, 15 significant digits.
void write_field_csv(const std::filesystem::path& path, const RadialGrid& grid, const Field& u);

} // namespace bkl
