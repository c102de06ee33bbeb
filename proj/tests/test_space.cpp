#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/errors.hpp"
#include "core/space.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace bkl;

namespace {

std::string sinh_like_table() {
    // phi = r + r^3/6 sampled on [0, 2], step 0.01
    std::string text = "# warp-table v1\n";
    char line[160];
    for (int i = 0; i <= 200; ++i) {
        double r = 0.01 * i;
        std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g\n", r, r + r * r * r / 6.0,
                      1.0 + r * r / 2.0, r);
        text += line;
    }
    return text;
}

std::string flaring_table() {
    // phi = r + r^5/120: nearly flat at the pole, opening up outward
    std::string text = "# warp-table v1\n";
    char line[160];
    for (int i = 0; i <= 200; ++i) {
        double r = 0.01 * i;
        double r2 = r * r;
        std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g\n", r,
                      r + r2 * r2 * r / 120.0, 1.0 + r2 * r2 / 24.0, r2 * r / 6.0);
        text += line;
    }
    return text;
}

} // namespace

TEST_CASE("kind tags and accessors") {
    auto e = ModelSpace::euclidean(3);
    CHECK(e.kind() == SpaceKind::euclidean);
    CHECK(e.dimension() == 3);
    CHECK(std::string(space_kind_name(e.kind())) == "euclidean");
    auto h = ModelSpace::hyperbolic(4, 2.0);
    CHECK(h.parameter() == 2.0);
    CHECK(std::string(space_kind_name(h.kind())) == "hyperbolic");
    auto g = ModelSpace::gaussian_soliton(2, 0.25);
    CHECK(g.parameter() == 0.25);
    CHECK(std::string(space_kind_name(SpaceKind::gaussian_soliton)) == "gaussian_soliton");
    CHECK(std::string(space_kind_name(SpaceKind::custom)) == "custom");
    CHECK_THROWS_AS(ModelSpace::euclidean(1), InvalidSpaceError);
    CHECK_THROWS_AS(ModelSpace::hyperbolic(3, 0.0), InvalidSpaceError);
    CHECK_THROWS_AS(ModelSpace::hyperbolic(3, -1.0), InvalidSpaceError);
}

TEST_CASE("drift coefficient closed forms") {
    CHECK(ModelSpace::euclidean(3).drift(2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ModelSpace::gaussian_soliton(2, 0.5).drift(2.0)
          == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(ModelSpace::hyperbolic(3, 1.0).drift(1.0)
          == doctest::Approx(2.0 / std::tanh(1.0)).epsilon(1e-14));
    CHECK(ModelSpace::hyperbolic(3, 4.0).drift(0.5)
          == doctest::Approx(2.0 * 2.0 / std::tanh(1.0)).epsilon(1e-14));
}

TEST_CASE("drift rejects the pole and negative radii") {
    auto e = ModelSpace::euclidean(3);
    CHECK_THROWS_AS(e.drift(0.0), DomainError);
    CHECK_THROWS_AS(e.drift(-1.0), DomainError);
    CHECK_THROWS_AS(e.ricci_eigenvalues(0.0), DomainError);
}

TEST_CASE("bakry emery eigenvalues") {
    auto e = ModelSpace::euclidean(5);
    for (double r : {0.3, 1.0, 4.0}) {
        auto eig = e.ricci_eigenvalues(r);
        CHECK(eig.radial == 0.0);
        CHECK(std::fabs(eig.tangential) <= 1e-12);
    }
    // soliton identity: both eigenvalues equal lambda at every radius
    for (double lambda : {0.25, 0.5, 1.0})
        for (double r : {0.05, 0.5, 1.0, 3.0, 9.0}) {
            auto eig = ModelSpace::gaussian_soliton(3, lambda).ricci_eigenvalues(r);
            CHECK(eig.radial == doctest::Approx(lambda).epsilon(1e-12));
            CHECK(eig.tangential == doctest::Approx(lambda).epsilon(1e-12));
        }
    auto eh = ModelSpace::hyperbolic(3, 1.0).ricci_eigenvalues(1.5);
    CHECK(eh.radial == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(eh.tangential == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("drift matches the log-derivative of the weighted volume density") {
    std::vector<ModelSpace> spaces;
    spaces.push_back(ModelSpace::euclidean(3));
    spaces.push_back(ModelSpace::hyperbolic(3, 1.0));
    spaces.push_back(ModelSpace::gaussian_soliton(4, 0.5));
    spaces.push_back(ModelSpace::custom(3, WarpTable::parse(sinh_like_table(), "inline")));
    for (const auto& sp : spaces) {
        double top = sp.kind() == SpaceKind::custom ? 1.9 : 10.0;
        for (double r = 1e-3; r <= top; r *= 1.9) {
            double eps = 1e-5 * r;
            double fd = (std::log(sp.weight(r + eps)) - std::log(sp.weight(r - eps))) / (2 * eps);
            CHECK(std::fabs(sp.drift(r) - fd) <= 1e-6);
        }
    }
}

TEST_CASE("ricci lower bound") {
    CHECK(ModelSpace::euclidean(3).ricci_lower_bound(10.0) == 0.0);
    CHECK(ModelSpace::gaussian_soliton(3, 0.5).ricci_lower_bound(10.0) == 0.0);
    CHECK(ModelSpace::hyperbolic(3, 1.0).ricci_lower_bound(5.0)
          == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(ModelSpace::hyperbolic(2, 3.0).ricci_lower_bound(2.0)
          == doctest::Approx(3.0).epsilon(1e-8));
    // monotone nondecreasing in R; strictly growing for the flaring profile
    auto fl = ModelSpace::custom(3, WarpTable::parse(flaring_table(), "t"));
    double prev = 0.0;
    for (double R : {0.5, 1.0, 1.5, 2.0}) {
        double K = fl.ricci_lower_bound(R);
        CHECK(K >= prev - 1e-12);
        prev = K;
    }
    // the worst (radial) eigenvalue sits at r = R: K = phi''(R)/phi(R)
    CHECK(fl.ricci_lower_bound(1.0)
          == doctest::Approx((1.0 / 6.0) / (1.0 + 1.0 / 120.0)).epsilon(1e-6));
    CHECK(fl.ricci_lower_bound(2.0)
          == doctest::Approx((8.0 / 6.0) / (2.0 + 32.0 / 120.0)).epsilon(1e-6));
    // constant curvature: flat in R up to the cancellation noise of the sampler
    double prev_h = 0.0;
    for (double R : {1.0, 2.0, 4.0}) {
        double K = ModelSpace::hyperbolic(3, 1.0).ricci_lower_bound(R);
        CHECK(K >= prev_h - 1e-7);
        prev_h = K;
    }
    CHECK_THROWS_AS(ModelSpace::euclidean(3).ricci_lower_bound(0.0), DomainError);
}

TEST_CASE("custom warp table evaluates like its closed form") {
    auto sp = ModelSpace::custom(3, WarpTable::parse(sinh_like_table(), "inline"));
    CHECK(sp.kind() == SpaceKind::custom);
    CHECK(sp.f(1.0) == 0.0);
    CHECK(sp.f_p(1.0) == 0.0);
    CHECK(sp.phi(1.0) == doctest::Approx(7.0 / 6.0).epsilon(1e-10));
    CHECK(sp.drift(1.0) == doctest::Approx(2.0 * 1.5 / (7.0 / 6.0)).epsilon(1e-8));
    // radial eigenvalue tends to -2 at the pole, so the sampled bound is 1
    CHECK(sp.ricci_lower_bound(2.0) == doctest::Approx(1.0).epsilon(1e-5));
    auto eig = sp.ricci_eigenvalues(2.0);
    CHECK(eig.radial == doctest::Approx(-1.2).epsilon(1e-8));
    CHECK(eig.tangential == doctest::Approx(-1.32).epsilon(1e-8));
    CHECK_THROWS_WITH_AS(sp.drift(2.5),
                         doctest::Contains("warp table covers"), DomainError);
}

TEST_CASE("warp table parsing rejects malformed input") {
    CHECK_THROWS_WITH_AS(WarpTable::parse("0 0 1 0\n1 1 1 0\n", "t"),
                         doctest::Contains("first line must be '# warp-table v1'"), ParseError);
    CHECK_THROWS_WITH_AS(WarpTable::parse("# warp-table v1\n", "t"),
                         doctest::Contains("need at least two records"), ParseError);
    CHECK_THROWS_WITH_AS(WarpTable::parse("", "t"), doctest::Contains("empty warp table"),
                         ParseError);
    CHECK_THROWS_WITH_AS(WarpTable::parse("# warp-table v1\n0 0 1 0\n0 0 1 0\n", "t"),
                         doctest::Contains("strictly increasing"), ParseError);
    CHECK_THROWS_WITH_AS(WarpTable::parse("# warp-table v1\n0 0 1 0\n1 1 1 0 9\n", "t"),
                         doctest::Contains("expected exactly four fields"), ParseError);
    CHECK_THROWS_WITH_AS(WarpTable::parse("# warp-table v1\n0 0 1 0\n1 1 one 0\n", "t"),
                         doctest::Contains("expected four decimal fields"), ParseError);
    CHECK_THROWS_WITH_AS(WarpTable::parse("# warp-table v1\n0.5 0.5 1 0\n1 1 1 0\n", "t"),
                         doctest::Contains("first record must be at r = 0"), InvalidSpaceError);
    CHECK_THROWS_WITH_AS(WarpTable::parse("# warp-table v1\n0 0.1 1 0\n1 1 1 0\n", "t"),
                         doctest::Contains("phi(0) must be 0"), InvalidSpaceError);
    CHECK_THROWS_WITH_AS(WarpTable::parse("# warp-table v1\n0 0 0.9 0\n1 1 1 0\n", "t"),
                         doctest::Contains("phi'(0) must be 1"), InvalidSpaceError);
    CHECK_THROWS_WITH_AS(WarpTable::parse("# warp-table v1\n0 0 1 0\n1 -1 1 0\n", "t"),
                         doctest::Contains("phi must be positive"), InvalidSpaceError);
}

TEST_CASE("comparison check") {
    auto r = ModelSpace::euclidean(3).comparison_check(4.0, 512);
    CHECK(r.pass);
    CHECK(r.mu == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.K == 0.0);
    CHECK(r.bound == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.worst_margin == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.worst_r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.samples == 512);
    CHECK(r.R == 4.0);

    auto h = ModelSpace::hyperbolic(3, 1.0).comparison_check(3.0, 1024);
    CHECK(h.pass);
    CHECK(h.mu == doctest::Approx(2.0 / std::tanh(1.0)).epsilon(1e-12));
    CHECK(h.bound == doctest::Approx(2.0 / std::tanh(1.0) + 4.0).epsilon(1e-6));
    CHECK(h.worst_margin == doctest::Approx(4.0).epsilon(1e-6));

    auto g = ModelSpace::gaussian_soliton(3, 0.5).comparison_check(4.0, 1024);
    CHECK(g.pass);
    CHECK(g.mu == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(g.worst_margin == doctest::Approx(0.0).epsilon(1e-12));

    for (double R : {2.0, 4.0, 8.0}) {
        CHECK(ModelSpace::euclidean(2).comparison_check(R, 256).pass);
        CHECK(ModelSpace::hyperbolic(5, 1.0).comparison_check(R, 256).pass);
        CHECK(ModelSpace::gaussian_soliton(2, 0.5).comparison_check(R, 256).pass);
    }

    CHECK_THROWS_WITH_AS(ModelSpace::euclidean(3).comparison_check(1.5, 16),
                         doctest::Contains("comparison radius must be >= 2"), DomainError);
    CHECK_THROWS_WITH_AS(ModelSpace::euclidean(3).comparison_check(2.0, 1),
                         doctest::Contains("at least 2 samples"), DomainError);
}

TEST_CASE("weight density closed forms") {
    auto e = ModelSpace::euclidean(3);
    CHECK(e.weight(2.0) == doctest::Approx(4.0).epsilon(1e-14));
    auto g = ModelSpace::gaussian_soliton(2, 0.5);
    CHECK(g.weight(2.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
    auto h = ModelSpace::hyperbolic(3, 1.0);
    CHECK(h.weight(1.0) == doctest::Approx(std::sinh(1.0) * std::sinh(1.0)).epsilon(1e-14));
}
