#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/solver.hpp"
#include "core/space.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

using namespace bkl;
namespace fs = std::filesystem;

namespace {

const char* kFullText = R"(# experiment description
[space]
kind = gaussian_soliton
dimension = 3
parameter = 0.5   ; soliton constant

[grid]
r_max = 8.0
n = 129

[time]
t0 = 0
T = 0.5
dt = 1e-3

[pde]
alpha = 2
q.kind = gaussian_bump
q.amplitude = 0.5
q.center = 2.0
q.width = 0.5

[initial]
kind = bump_plus_constant
base = 2
amplitude = 1
center = 0
width = 1

[estimate]
R = 2.0
cutoff_a = 0.75

[checks]
list = lemma21, comparison

[output]
dir = "runs # keep"
seed = 42
)";

Config valid_config() { return parse_config_text("", "."); }

void expect_single(const Config& cfg, const std::string& message) {
    auto problems = validate_config(cfg);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0] == message);
}

} // namespace

TEST_CASE("parsing a full config") {
    Config cfg = parse_config_text(kFullText, "/some/dir");
    CHECK(cfg.space_kind == "gaussian_soliton");
    CHECK(cfg.dimension == 3);
    CHECK(cfg.parameter == 0.5);
    CHECK(cfg.r_max == 8.0);
    CHECK(cfg.n == 129);
    CHECK(cfg.t0 == 0.0);
    CHECK(cfg.T == 0.5);
    CHECK(cfg.dt == 1e-3);
    CHECK(cfg.alpha == 2.0);
    CHECK(cfg.q_kind == "gaussian_bump");
    CHECK(cfg.q_amplitude == 0.5);
    CHECK(cfg.q_center == 2.0);
    CHECK(cfg.q_width == 0.5);
    CHECK(cfg.initial_kind == "bump_plus_constant");
    CHECK(cfg.initial_base == 2.0);
    CHECK(cfg.initial_amplitude == 1.0);
    CHECK(cfg.R == 2.0);
    CHECK(cfg.cutoff_a == 0.75);
    CHECK(cfg.checks == std::vector<std::string>{"lemma21", "comparison"});
    CHECK(cfg.output_dir == "runs # keep");
    REQUIRE(cfg.seed.has_value());
    CHECK(*cfg.seed == 42);
    CHECK(cfg.base_dir == fs::path("/some/dir"));
    CHECK(cfg.unknown_keys.empty());
    CHECK(validate_config(cfg).empty());
}

TEST_CASE("defaults from empty text") {
    Config cfg = parse_config_text("", ".");
    CHECK(cfg.space_kind == "euclidean");
    CHECK(cfg.dimension == 3);
    CHECK(cfg.r_max == 8.0);
    CHECK(cfg.n == 129);
    CHECK(cfg.T == 1.0);
    CHECK(cfg.dt == 1e-3);
    CHECK(cfg.alpha == 1.0);
    CHECK(cfg.q_kind == "zero");
    CHECK(cfg.initial_kind == "constant");
    CHECK(cfg.initial_value == 1.0);
    CHECK(cfg.R == 2.0);
    CHECK(cfg.cutoff_a == 0.75);
    CHECK(cfg.checks.empty());
    CHECK(cfg.output_dir == "out");
    CHECK(!cfg.seed.has_value());
    CHECK(!cfg.D_override.has_value());
    CHECK(validate_config(cfg).empty());
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_config_text("[grid]\nn = 5\nn = 7\n", "."),
                         doctest::Contains("line 3: duplicate key grid.n (first set on line 2)"),
                         ParseError);
    CHECK_THROWS_WITH_AS(parse_config_text("[grid]\njust words\n", "."),
                         doctest::Contains("line 2: expected key = value, got \"just words\""),
                         ParseError);
    CHECK_THROWS_WITH_AS(parse_config_text("n = 5\n", "."),
                         doctest::Contains("line 1: key outside any [section]"), ParseError);
    CHECK_THROWS_WITH_AS(parse_config_text("[grid]\n= 5\n", "."),
                         doctest::Contains("line 2: empty key"), ParseError);
    CHECK_THROWS_WITH_AS(parse_config_text("[]\n", "."),
                         doctest::Contains("line 1: empty section name"), ParseError);
    CHECK_THROWS_WITH_AS(parse_config_text("\n[grid\n", "."),
                         doctest::Contains("line 2: unterminated section header"), ParseError);
    CHECK_THROWS_WITH_AS(parse_config_text("[output]\ndir = \"half\n", "."),
                         doctest::Contains("line 2: unbalanced quotes"), ParseError);
    CHECK_THROWS_WITH_AS(parse_config_text("[grid]\nn = 12.5\n", "."),
                         doctest::Contains("line 2: grid.n must be an integer"), ParseError);
    CHECK_THROWS_WITH_AS(parse_config_text("[grid]\nr_max = abc\n", "."),
                         doctest::Contains("line 2: grid.r_max is not a number: \"abc\""),
                         ParseError);
}

TEST_CASE("validation rules") {
    auto cfg = valid_config();
    cfg.space_kind = "flatland";
    expect_single(cfg, "space.kind: unknown space kind \"flatland\"");

    cfg = valid_config();
    cfg.dimension = 1;
    expect_single(cfg, "space.dimension: must be at least 2");

    cfg = valid_config();
    cfg.space_kind = "hyperbolic";
    expect_single(cfg, "space.parameter: hyperbolic curvature parameter must be positive");
    cfg.parameter = 1.0;
    CHECK(validate_config(cfg).empty());

    cfg = valid_config();
    cfg.space_kind = "custom";
    expect_single(cfg, "space.warp_table: required for custom spaces");

    cfg = valid_config();
    cfg.r_max = 0.0;
    {
        auto problems = validate_config(cfg);
        CHECK(std::find(problems.begin(), problems.end(), "grid.r_max: must be positive")
              != problems.end());
    }

    cfg = valid_config();
    cfg.n = 7;
    expect_single(cfg, "grid.n: must be at least 8");

    cfg = valid_config();
    cfg.T = 0.0;
    expect_single(cfg, "time.T: must be positive");

    cfg = valid_config();
    cfg.dt = 0.0;
    expect_single(cfg, "time.dt: must be positive");

    cfg = valid_config();
    cfg.dt = 2.0;
    expect_single(cfg, "time.dt: must not exceed time.T");

    cfg = valid_config();
    cfg.alpha = std::nan("");
    expect_single(cfg, "pde.alpha: must be finite");

    cfg = valid_config();
    cfg.q_kind = "mystery";
    expect_single(cfg, "pde.q.kind: unknown source kind \"mystery\"");

    cfg = valid_config();
    cfg.q_kind = "gaussian_bump";
    cfg.q_width = 0.0;
    expect_single(cfg, "pde.q.width: must be positive");

    cfg = valid_config();
    cfg.q_kind = "tabulated";
    expect_single(cfg, "pde.q.table: required for tabulated sources");

    cfg = valid_config();
    cfg.initial_value = 0.0;
    expect_single(cfg, "initial.value: must be positive");

    cfg = valid_config();
    cfg.initial_kind = "gaussian";
    cfg.initial_amplitude = 0.0;
    expect_single(cfg, "initial.amplitude: must be positive");

    cfg = valid_config();
    cfg.initial_kind = "gaussian";
    cfg.initial_width = 0.0;
    expect_single(cfg, "initial.width: must be positive");

    cfg = valid_config();
    cfg.initial_kind = "bump_plus_constant";
    cfg.initial_base = 0.0;
    expect_single(cfg, "initial.base: must be positive");

    cfg = valid_config();
    cfg.initial_kind = "bump_plus_constant";
    cfg.initial_amplitude = -1.0;
    expect_single(cfg, "initial.amplitude: must be nonnegative");

    cfg = valid_config();
    cfg.initial_kind = "wiggle";
    expect_single(cfg, "initial.kind: unknown initial kind \"wiggle\"");

    cfg = valid_config();
    cfg.R = 0.0;
    expect_single(cfg, "estimate.R: must be positive");

    cfg = valid_config();
    cfg.R = 5.0;
    expect_single(cfg, "estimate.R: must not exceed half of grid.r_max");

    cfg = valid_config();
    cfg.D_override = 0.0;
    expect_single(cfg, "estimate.D_override: must be positive");

    cfg = valid_config();
    cfg.cutoff_a = 1.0;
    expect_single(cfg, "estimate.cutoff_a: must lie strictly between 0 and 1");

    cfg = valid_config();
    cfg.checks = {"sanity"};
    expect_single(cfg, "checks.list: unknown check \"sanity\"");

    cfg = valid_config();
    cfg.checks = {"bochner", "lemma21", "theorem11", "harnack", "comparison", "ode"};
    CHECK(validate_config(cfg).empty());

    cfg = valid_config();
    cfg.checks = {"ode"};
    cfg.q_kind = "gaussian_bump";
    expect_single(cfg, "pde.q.kind: ode check needs a spatially constant source");

    cfg = valid_config();
    cfg.checks = {"liouville_sweep"};
    expect_single(cfg,
                  "grid.r_max: liouville_sweep evaluates radii up to 16 and needs r_max >= 32");
    cfg.r_max = 40.0;
    CHECK(validate_config(cfg).empty());

    cfg = valid_config();
    cfg.output_dir = "";
    expect_single(cfg, "output.dir: must not be empty");

    Config unk = parse_config_text("[grid]\nfoo = 1\n", ".");
    expect_single(unk, "grid.foo: unknown key");
}

TEST_CASE("canonical text and content hash") {
    Config a = parse_config_text(kFullText, "/some/dir");
    // same values, scrambled formatting and section order
    std::string other = "[output]\nseed=42\ndir = elsewhere\n"
                        "[checks]\nlist = lemma21 ,comparison\n"
                        "[estimate]\nR = 2\ncutoff_a = 7.5e-1\n"
                        "[initial]\nkind=bump_plus_constant\nbase=2.0\namplitude=1\n"
                        "center=0\nwidth=1\n"
                        "[pde]\nalpha = 2.0\nq.kind = gaussian_bump\nq.amplitude = .5\n"
                        "q.center = 2\nq.width = 0.5\n"
                        "[time]\nt0=0\nT=.5\ndt=0.001\n"
                        "[grid]\nr_max=8\nn=129\n"
                        "[space]\nkind=gaussian_soliton\ndimension=3\nparameter=.5\n";
    Config b = parse_config_text(other, "/other/dir");
    CHECK(canonical_text(a) == canonical_text(b));
    CHECK(content_hash(a) == content_hash(b));
    CHECK(content_hash_hex(a) == content_hash_hex(b));
    // the output directory never feeds the hash
    CHECK(a.output_dir != b.output_dir);

    Config c = b;
    c.seed = 43;
    CHECK(content_hash(c) != content_hash(b));
    Config d = b;
    d.dt = 5e-4;
    CHECK(content_hash(d) != content_hash(b));

    std::string hex = content_hash_hex(a);
    CHECK(hex.size() == 16);
    CHECK(hex.find_first_not_of("0123456789abcdef") == std::string::npos);
}

TEST_CASE("numeric sweep assignment") {
    auto cfg = valid_config();
    set_numeric(cfg, "grid.n", 65.0);
    CHECK(cfg.n == 65);
    set_numeric(cfg, "time.dt", 5e-4);
    CHECK(cfg.dt == 5e-4);
    set_numeric(cfg, "pde.alpha", -1.0);
    CHECK(cfg.alpha == -1.0);
    set_numeric(cfg, "estimate.D_override", 3.5);
    REQUIRE(cfg.D_override.has_value());
    CHECK(*cfg.D_override == 3.5);
    set_numeric(cfg, "space.dimension", 4.0);
    CHECK(cfg.dimension == 4);

    CHECK_THROWS_WITH_AS(set_numeric(cfg, "grid.n", 64.5),
                         doctest::Contains("grid.n: sweep value must be an integer"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(set_numeric(cfg, "space.kind", 1.0),
                         doctest::Contains("not a sweepable numeric field"), ConfigError);
    CHECK_THROWS_WITH_AS(set_numeric(cfg, "checks.list", 1.0),
                         doctest::Contains("not a sweepable numeric field"), ConfigError);
}

TEST_CASE("factories build the described problem") {
    Config cfg = parse_config_text(kFullText, "/some/dir");
    auto space = make_space(cfg);
    CHECK(space.kind() == SpaceKind::gaussian_soliton);
    CHECK(space.dimension() == 3);
    CHECK(space.parameter() == 0.5);

    auto q = make_qprofile(cfg);
    CHECK(q.kind() == QProfile::Kind::gaussian_bump);
    CHECK(q.value(2.0, 0.0) == 0.5);

    RadialGrid grid(cfg.r_max, cfg.n);
    auto u0 = make_initial(cfg, grid);
    CHECK(u0[0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(u0[64] == doctest::Approx(2.0 + std::exp(-16.0)).epsilon(1e-12));

    auto problem = make_problem(cfg);
    CHECK(problem.alpha == 2.0);
    CHECK(problem.T == 0.5);
    CHECK(problem.dt == 1e-3);
    CHECK(problem.u0.size() == 129);
    CHECK_NOTHROW(problem.validate());

    // gaussian initial: amplitude exp(-(r/width)^2)
    Config g = valid_config();
    g.initial_kind = "gaussian";
    g.initial_amplitude = 0.25;
    g.initial_width = 2.0;
    auto ug = make_initial(g, grid);
    CHECK(ug[0] == 0.25);
    CHECK(ug[16] == doctest::Approx(0.25 * std::exp(-0.25)).epsilon(1e-14));
}

TEST_CASE("tabulated source loads from csv") {
    fs::path dir = fs::temp_directory_path() / "bkl-config-test";
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "source.csv");
        out << "r,value\n0,1.0\n1, 3.0\n2,3.0  # plateau\n";
    }
    Config cfg = valid_config();
    cfg.q_kind = "tabulated";
    cfg.q_table = "source.csv";
    cfg.base_dir = dir;
    CHECK(validate_config(cfg).empty());
    auto q = make_qprofile(cfg);
    CHECK(q.kind() == QProfile::Kind::tabulated);
    CHECK(q.value(0.5, 0.0) == doctest::Approx(2.0).epsilon(1e-14));

    {
        std::ofstream out(dir / "broken.csv");
        out << "r,value\n0,1.0\noops\n";
    }
    cfg.q_table = "broken.csv";
    CHECK_THROWS_WITH_AS(make_qprofile(cfg), doctest::Contains("line 3"), ParseError);

    cfg.q_table = "missing.csv";
    CHECK_THROWS_WITH_AS(make_qprofile(cfg), doctest::Contains("cannot open source table"),
                         IoError);
    fs::remove_all(dir);
}

TEST_CASE("custom space from a warp table file") {
    fs::path dir = fs::temp_directory_path() / "bkl-config-warp";
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "warp.tbl");
        out << "# warp-table v1\n";
        char line[160];
        for (int i = 0; i <= 200; ++i) {
            double r = 0.01 * i;
            std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g\n", r,
                          r + r * r * r / 6.0, 1.0 + r * r / 2.0, r);
            out << line;
        }
    }
    Config cfg = valid_config();
    cfg.space_kind = "custom";
    cfg.warp_table = "warp.tbl";
    cfg.base_dir = dir;
    cfg.r_max = 2.0;
    cfg.R = 1.0;
    CHECK(validate_config(cfg).empty());
    auto space = make_space(cfg);
    CHECK(space.kind() == SpaceKind::custom);
    CHECK(space.drift(1.0) == doctest::Approx(2.0 * 1.5 / (7.0 / 6.0)).epsilon(1e-12));
    fs::remove_all(dir);
}

TEST_CASE("config file io") {
    CHECK_THROWS_WITH_AS(parse_config_file("/nonexistent/config.ini"),
                         doctest::Contains("cannot open config"), IoError);

    fs::path dir = fs::temp_directory_path() / "bkl-config-file";
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "run.ini");
        out << "[grid]\nn = 65\n";
    }
    Config cfg = parse_config_file(dir / "run.ini");
    CHECK(cfg.n == 65);
    CHECK(cfg.base_dir == dir);
    fs::remove_all(dir);
}
