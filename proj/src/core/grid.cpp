#include "core/grid.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace bkl {

namespace {

void check_size(const RadialGrid& grid, const Field& u) {
    if (static_cast<int>(u.size()) != grid.n)
        throw DomainError("field has " + std::to_string(u.size()) + " values, grid has "
                          + std::to_string(grid.n) + " nodes");
}

// S_i = sum_{j=1}^{i} j^{N-1}, i = 0..count-1.
std::vector<double> power_sums(int N, int count) {
    std::vector<double> s(count, 0.0);
    for (int i = 1; i < count; ++i) s[i] = s[i - 1] + std::pow(static_cast<double>(i), N - 1);
    return s;
}

} // namespace

RadialGrid::RadialGrid(double r_max_, int n_) : r_max(r_max_), n(n_) {
    if (!(r_max > 0.0)) throw DomainError("grid radius must be positive");
    if (n < 8) throw DomainError("grid needs at least 8 nodes, got " + std::to_string(n));
}

std::vector<double> RadialGrid::nodes() const {
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = this->r(i);
    return r;
}

std::vector<double> edge_fluxes(const ModelSpace& space, const RadialGrid& grid) {
    const int n = grid.n;
    const int N = space.dimension();
    const double dr = grid.dr();
    const std::vector<double> S = power_sums(N, n);
    std::vector<double> g(n - 1);
    const double drpow = std::pow(dr, N - 1);
    for (int i = 0; i < n - 1; ++i) {
        const double ghat = 2.0 * N * S[i] / (2 * i + 1);
        const double rh = (i + 0.5) * dr;
        const double shape = std::exp(-space.f(rh)) * std::pow(space.phi(rh) / rh, N - 1);
        g[i] = ghat * drpow * shape;
    }
    return g;
}

std::vector<double> node_weights(const ModelSpace& space, const RadialGrid& grid) {
    std::vector<double> m(grid.n);
    m[0] = 0.0;
    for (int i = 1; i < grid.n; ++i) m[i] = space.weight(grid.r(i));
    return m;
}

Field apply_weighted_laplacian(const ModelSpace& space, const RadialGrid& grid,
                               const Field& u, OuterStencil outer) {
    check_size(grid, u);
    const int n = grid.n;
    const int N = space.dimension();
    const double dr = grid.dr();
    const double dr2 = dr * dr;
    const std::vector<double> g = edge_fluxes(space, grid);
    const std::vector<double> m = node_weights(space, grid);
    Field out(n);
    out[0] = 2.0 * N * (u[1] - u[0]) / dr2;
    for (int i = 1; i < n - 1; ++i)
        out[i] = (g[i] * (u[i + 1] - u[i]) - g[i - 1] * (u[i] - u[i - 1])) / (m[i] * dr2);
    if (outer == OuterStencil::onesided) {
        const double upp = (2 * u[n - 1] - 5 * u[n - 2] + 4 * u[n - 3] - u[n - 4]) / dr2;
        const double up = (3 * u[n - 1] - 4 * u[n - 2] + u[n - 3]) / (2 * dr);
        out[n - 1] = upp + space.drift(grid.r(n - 1)) * up;
    } else {
        out[n - 1] = 2.0 * g[n - 2] * (u[n - 2] - u[n - 1]) / (m[n - 1] * dr2);
    }
    return out;
}

Field radial_gradient(const RadialGrid& grid, const Field& u) {
    check_size(grid, u);
    const int n = grid.n;
    const double dr = grid.dr();
    Field out(n);
    out[0] = 0.0;
    for (int i = 1; i < n - 1; ++i) out[i] = (u[i + 1] - u[i - 1]) / (2 * dr);
    out[n - 1] = (3 * u[n - 1] - 4 * u[n - 2] + u[n - 3]) / (2 * dr);
    return out;
}

double weighted_inner(const ModelSpace& space, const RadialGrid& grid,
                      const Field& u, const Field& v) {
    check_size(grid, u);
    check_size(grid, v);
    const double dr = grid.dr();
    const std::vector<double> m = node_weights(space, grid);
    double acc = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        const double w = (i == 0 || i == grid.n - 1) ? 0.5 * dr : dr;
        acc += w * u[i] * v[i] * m[i];
    }
    return acc;
}

Tridiagonal neumann_tridiagonal(const ModelSpace& space, const RadialGrid& grid) {
    const int n = grid.n;
    const int N = space.dimension();
    const double dr2 = grid.dr() * grid.dr();
    const std::vector<double> g = edge_fluxes(space, grid);
    const std::vector<double> m = node_weights(space, grid);
    Tridiagonal t;
    t.lo.assign(n, 0.0);
    t.di.assign(n, 0.0);
    t.up.assign(n, 0.0);
    t.up[0] = 2.0 * N / dr2;
    t.di[0] = -t.up[0];
    for (int i = 1; i < n - 1; ++i) {
        t.up[i] = g[i] / (m[i] * dr2);
        t.lo[i] = g[i - 1] / (m[i] * dr2);
        t.di[i] = -(t.up[i] + t.lo[i]);
    }
    t.lo[n - 1] = 2.0 * g[n - 2] / (m[n - 1] * dr2);
    t.di[n - 1] = -t.lo[n - 1];
    return t;
}

void write_field_csv(const std::filesystem::path& path, const RadialGrid& grid, const Field& u) {
    check_size(grid, u);
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "r,value\n";
    char buf[80];
    for (int i = 0; i < grid.n; ++i) {
        std::snprintf(buf, sizeof buf, "%.15g,%.15g\n", grid.r(i), u[i]);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace bkl
