#include "core/space.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace bkl {

namespace {

std::string fmt(const char* format, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, format, a, b);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Cubic Hermite on [x0, x1] from endpoint values and derivatives.
double hermite(double x, double x0, double x1, double v0, double v1, double d0, double d1) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return v0 * (2 * t3 - 3 * t2 + 1) + d0 * h * (t3 - 2 * t2 + t)
         + v1 * (-2 * t3 + 3 * t2) + d1 * h * (t3 - t2);
}

} // namespace

const char* space_kind_name(SpaceKind kind) {
    switch (kind) {
        case SpaceKind::euclidean: return "euclidean";
        case SpaceKind::hyperbolic: return "hyperbolic";
        case SpaceKind::gaussian_soliton: return "gaussian_soliton";
        case SpaceKind::custom: return "custom";
    }
    return "unknown";
}

WarpTable WarpTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open warp table: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

WarpTable WarpTable::parse(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    WarpTable t;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty()) continue;
        if (!header_seen) {
            if (s != "# warp-table v1")
                throw ParseError(origin + ": first line must be '# warp-table v1'");
            header_seen = true;
            continue;
        }
        std::istringstream row(s);
        double r, phi, dphi, ddphi;
        if (!(row >> r >> phi >> dphi >> ddphi))
            throw ParseError(origin + ": line " + std::to_string(lineno)
                             + ": expected four decimal fields");
        std::string extra;
        if (row >> extra)
            throw ParseError(origin + ": line " + std::to_string(lineno)
                             + ": expected exactly four fields");
        if (!t.r.empty() && r <= t.r.back())
            throw ParseError(origin + ": line " + std::to_string(lineno)
                             + ": r must be strictly increasing");
        t.r.push_back(r);
        t.phi.push_back(phi);
        t.dphi.push_back(dphi);
        t.ddphi.push_back(ddphi);
    }
    if (!header_seen) throw ParseError(origin + ": empty warp table");
    if (t.r.size() < 2) throw ParseError(origin + ": need at least two records");
    if (t.r.front() != 0.0)
        throw InvalidSpaceError(origin + ": first record must be at r = 0");
    if (std::abs(t.phi.front()) > 1e-12)
        throw InvalidSpaceError(origin + ": phi(0) must be 0");
    if (std::abs(t.dphi.front() - 1.0) > 1e-12)
        throw InvalidSpaceError(origin + ": phi'(0) must be 1");
    for (std::size_t i = 1; i < t.r.size(); ++i)
        if (t.phi[i] <= 0.0)
            throw InvalidSpaceError(origin + ": phi must be positive for r > 0 (record "
                                    + std::to_string(i + 1) + ")");
    return t;
}

std::size_t WarpTable::interval(double x) const {
    if (x < r.front() || x > r.back())
        throw DomainError(fmt("warp table covers [%g, %g] only", r.front(), r.back())
                          + fmt("; requested r = %g", x));
    auto it = std::upper_bound(r.begin(), r.end(), x);
    std::size_t j = static_cast<std::size_t>(it - r.begin());
    if (j == 0) j = 1;
    if (j >= r.size()) j = r.size() - 1;
    return j - 1;
}

double WarpTable::eval_phi(double x) const {
    const std::size_t j = interval(x);
    return hermite(x, r[j], r[j + 1], phi[j], phi[j + 1], dphi[j], dphi[j + 1]);
}

double WarpTable::eval_dphi(double x) const {
    const std::size_t j = interval(x);
    return hermite(x, r[j], r[j + 1], dphi[j], dphi[j + 1], ddphi[j], ddphi[j + 1]);
}

double WarpTable::eval_ddphi(double x) const {
    const std::size_t j = interval(x);
    const double t = (x - r[j]) / (r[j + 1] - r[j]);
    return ddphi[j] * (1 - t) + ddphi[j + 1] * t;
}

ModelSpace::ModelSpace(SpaceKind kind, int dimension, double param)
    : kind_(kind), dim_(dimension), param_(param) {
    if (dimension < 2)
        throw InvalidSpaceError("dimension must be an integer >= 2, got "
                                + std::to_string(dimension));
}

ModelSpace ModelSpace::euclidean(int dimension) {
    return ModelSpace(SpaceKind::euclidean, dimension, 0.0);
}

ModelSpace ModelSpace::hyperbolic(int dimension, double K) {
    if (!(K > 0.0)) throw InvalidSpaceError(fmt("hyperbolic curvature must be positive, got %g", K));
    return ModelSpace(SpaceKind::hyperbolic, dimension, K);
}

ModelSpace ModelSpace::gaussian_soliton(int dimension, double lambda) {
    return ModelSpace(SpaceKind::gaussian_soliton, dimension, lambda);
}

ModelSpace ModelSpace::custom(int dimension, WarpTable table) {
    ModelSpace s(SpaceKind::custom, dimension, 0.0);
    s.table_ = std::move(table);
    return s;
}

double ModelSpace::phi(double r) const {
    switch (kind_) {
        case SpaceKind::euclidean:
        case SpaceKind::gaussian_soliton: return r;
        case SpaceKind::hyperbolic: {
            const double sK = std::sqrt(param_);
            return std::sinh(sK * r) / sK;
        }
        case SpaceKind::custom: return table_.eval_phi(r);
    }
    return r;
}

double ModelSpace::phi_p(double r) const {
    switch (kind_) {
        case SpaceKind::euclidean:
        case SpaceKind::gaussian_soliton: return 1.0;
        case SpaceKind::hyperbolic: return std::cosh(std::sqrt(param_) * r);
        case SpaceKind::custom: return table_.eval_dphi(r);
    }
    return 1.0;
}

double ModelSpace::phi_pp(double r) const {
    switch (kind_) {
        case SpaceKind::euclidean:
        case SpaceKind::gaussian_soliton: return 0.0;
        case SpaceKind::hyperbolic: {
            const double sK = std::sqrt(param_);
            return sK * std::sinh(sK * r);
        }
        case SpaceKind::custom: return table_.eval_ddphi(r);
    }
    return 0.0;
}

double ModelSpace::f(double r) const {
    return kind_ == SpaceKind::gaussian_soliton ? 0.5 * param_ * r * r : 0.0;
}

double ModelSpace::f_p(double r) const {
    return kind_ == SpaceKind::gaussian_soliton ? param_ * r : 0.0;
}

double ModelSpace::f_pp(double) const {
    return kind_ == SpaceKind::gaussian_soliton ? param_ : 0.0;
}

double ModelSpace::weight(double r) const {
    return std::exp(-f(r)) * std::pow(phi(r), dim_ - 1);
}

void ModelSpace::check_radius(double r) const {
    if (!(r > 0.0)) throw DomainError(fmt("radius must be positive, got %g", r));
}

double ModelSpace::drift(double r) const {
    check_radius(r);
    const double p = phi(r);
    if (!(p > 0.0))
        throw InvalidSpaceError(fmt("warp profile not positive at r = %g (phi = %g)", r, p));
    return (dim_ - 1) * phi_p(r) / p - f_p(r);
}

RicciEigenvalues ModelSpace::ricci_eigenvalues(double r) const {
    check_radius(r);
    const double p = phi(r);
    if (!(p > 0.0))
        throw InvalidSpaceError(fmt("warp profile not positive at r = %g (phi = %g)", r, p));
    const double pp = phi_p(r);
    const double ppp = phi_pp(r);
    RicciEigenvalues e;
    e.radial = -(dim_ - 1) * ppp / p + f_pp(r);
    e.tangential = -ppp / p + (dim_ - 2) * (1.0 - pp * pp) / (p * p) + f_p(r) * pp / p;
    return e;
}

double ModelSpace::ricci_lower_bound(double R) const {
    if (!(R > 0.0)) throw DomainError(fmt("radius must be positive, got %g", R));
    auto sample = [&](int count) {
        double min_eig = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= count; ++i) {
            const double r = R * static_cast<double>(i) / count;
            const RicciEigenvalues e = ricci_eigenvalues(r);
            min_eig = std::min(min_eig, std::min(e.radial, e.tangential));
        }
        return std::max(0.0, -min_eig / (dim_ - 1));
    };
    int count = 10000;
    double K = sample(count);
    for (int pass = 0; pass < 8; ++pass) {
        count *= 2;
        const double refined = sample(count);
        const bool stable = std::abs(refined - K) <= 1e-6;
        K = refined;
        if (stable) break;
    }
    return K;
}

ComparisonResult ModelSpace::comparison_check(double R, int samples) const {
    if (!(R >= 2.0)) throw DomainError(fmt("comparison radius must be >= 2, got %g", R));
    if (samples < 2) throw DomainError("comparison needs at least 2 samples");
    ComparisonResult res;
    res.R = R;
    res.samples = samples;
    res.mu = drift(1.0);
    res.K = ricci_lower_bound(R);
    res.bound = res.mu + (dim_ - 1) * res.K * (R - 1.0);
    res.worst_margin = std::numeric_limits<double>::infinity();
    res.worst_r = 1.0;
    for (int i = 0; i < samples; ++i) {
        const double r = 1.0 + (R - 1.0) * static_cast<double>(i) / (samples - 1);
        const double margin = res.bound - drift(r);
        if (margin < res.worst_margin) {
            res.worst_margin = margin;
            res.worst_r = r;
        }
    }
    res.pass = res.worst_margin >= -1e-12;
    return res;
}

} // namespace bkl
