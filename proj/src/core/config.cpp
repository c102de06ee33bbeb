#include "core/config.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace bkl {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        else if (!quoted && (line[i] == '#' || line[i] == ';')) return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& s, int lineno) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        return s.substr(1, s.size() - 2);
    if (!s.empty() && (s.front() == '"' || s.back() == '"'))
        throw ParseError("line " + std::to_string(lineno) + ": unbalanced quotes");
    return s;
}

struct RawEntry {
    std::string value;
    int lineno;
};

using RawMap = std::map<std::string, RawEntry>;

RawMap parse_ini(const std::string& text) {
    RawMap entries;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']')
                throw ParseError("line " + std::to_string(lineno)
                                 + ": unterminated section header");
            section = trim(body.substr(1, body.size() - 2));
            if (section.empty())
                throw ParseError("line " + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno)
                             + ": expected key = value, got \"" + body + "\"");
        if (section.empty())
            throw ParseError("line " + std::to_string(lineno)
                             + ": key outside any [section]");
        const std::string key = trim(body.substr(0, eq));
        if (key.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key");
        const std::string path = section + "." + key;
        if (entries.count(path))
            throw ParseError("line " + std::to_string(lineno) + ": duplicate key " + path
                             + " (first set on line "
                             + std::to_string(entries[path].lineno) + ")");
        entries[path] = {unquote(trim(body.substr(eq + 1)), lineno), lineno};
    }
    return entries;
}

class Extractor {
public:
    explicit Extractor(RawMap entries) : entries_(std::move(entries)) {}

    bool has(const std::string& path) const { return entries_.count(path) != 0; }

    void string_field(const std::string& path, std::string& out) {
        const auto it = entries_.find(path);
        if (it == entries_.end()) return;
        out = it->second.value;
        taken_.push_back(path);
    }

    void double_field(const std::string& path, double& out) {
        const auto it = entries_.find(path);
        if (it == entries_.end()) return;
        out = to_double(path, it->second);
        taken_.push_back(path);
    }

    void optional_double_field(const std::string& path, std::optional<double>& out) {
        const auto it = entries_.find(path);
        if (it == entries_.end()) return;
        out = to_double(path, it->second);
        taken_.push_back(path);
    }

    void int_field(const std::string& path, int& out) {
        const auto it = entries_.find(path);
        if (it == entries_.end()) return;
        const double v = to_double(path, it->second);
        if (v != std::floor(v) || std::abs(v) > 1e9)
            throw ParseError("line " + std::to_string(it->second.lineno) + ": " + path
                             + " must be an integer");
        out = static_cast<int>(v);
        taken_.push_back(path);
    }

    void optional_long_field(const std::string& path, std::optional<long>& out) {
        const auto it = entries_.find(path);
        if (it == entries_.end()) return;
        const double v = to_double(path, it->second);
        if (v != std::floor(v))
            throw ParseError("line " + std::to_string(it->second.lineno) + ": " + path
                             + " must be an integer");
        out = static_cast<long>(v);
        taken_.push_back(path);
    }

    void list_field(const std::string& path, std::vector<std::string>& out) {
        const auto it = entries_.find(path);
        if (it == entries_.end()) return;
        out.clear();
        std::istringstream ss(it->second.value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::string token = trim(item);
            if (!token.empty()) out.push_back(token);
        }
        taken_.push_back(path);
    }

    std::vector<std::string> leftovers() const {
        std::vector<std::string> out;
        for (const auto& [path, entry] : entries_)
            if (std::find(taken_.begin(), taken_.end(), path) == taken_.end())
                out.push_back(path);
        return out;
    }

private:
    static double to_double(const std::string& path, const RawEntry& entry) {
        const char* text = entry.value.c_str();
        char* end = nullptr;
        const double v = std::strtod(text, &end);
        if (end == text || *end != '\0')
            throw ParseError("line " + std::to_string(entry.lineno) + ": " + path
                             + " is not a number: \"" + entry.value + "\"");
        return v;
    }

    RawMap entries_;
    std::vector<std::string> taken_;
};

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> kinds{
        "bochner", "lemma21", "theorem11", "harnack", "comparison", "ode",
        "liouville_sweep"};
    return kinds;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

Config parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
    Extractor ex(parse_ini(text));
    Config cfg;
    cfg.base_dir = base_dir;

    ex.string_field("space.kind", cfg.space_kind);
    ex.int_field("space.dimension", cfg.dimension);
    ex.double_field("space.parameter", cfg.parameter);
    ex.string_field("space.warp_table", cfg.warp_table);

    ex.double_field("grid.r_max", cfg.r_max);
    ex.int_field("grid.n", cfg.n);

    ex.double_field("time.t0", cfg.t0);
    ex.double_field("time.T", cfg.T);
    ex.double_field("time.dt", cfg.dt);

    ex.double_field("pde.alpha", cfg.alpha);
    ex.string_field("pde.q.kind", cfg.q_kind);
    ex.double_field("pde.q.value", cfg.q_value);
    ex.double_field("pde.q.amplitude", cfg.q_amplitude);
    ex.double_field("pde.q.center", cfg.q_center);
    ex.double_field("pde.q.width", cfg.q_width);
    ex.double_field("pde.q.rate", cfg.q_rate);
    ex.string_field("pde.q.table", cfg.q_table);

    ex.string_field("initial.kind", cfg.initial_kind);
    ex.double_field("initial.value", cfg.initial_value);
    ex.double_field("initial.amplitude", cfg.initial_amplitude);
    ex.double_field("initial.center", cfg.initial_center);
    ex.double_field("initial.width", cfg.initial_width);
    ex.double_field("initial.base", cfg.initial_base);

    ex.double_field("estimate.R", cfg.R);
    ex.optional_double_field("estimate.D_override", cfg.D_override);
    ex.double_field("estimate.cutoff_a", cfg.cutoff_a);

    ex.list_field("checks.list", cfg.checks);

    ex.string_field("output.dir", cfg.output_dir);
    ex.optional_long_field("output.seed", cfg.seed);

    cfg.unknown_keys = ex.leftovers();
    return cfg;
}

Config parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.has_parent_path() ? path.parent_path()
                                                               : std::filesystem::path("."));
}

std::vector<std::string> validate_config(const Config& cfg) {
    std::vector<std::string> problems;
    auto bad = [&](const std::string& path, const std::string& msg) {
        problems.push_back(path + ": " + msg);
    };

    const bool known_space = cfg.space_kind == "euclidean" || cfg.space_kind == "hyperbolic"
                             || cfg.space_kind == "gaussian_soliton"
                             || cfg.space_kind == "custom";
    if (!known_space) bad("space.kind", "unknown space kind \"" + cfg.space_kind + "\"");
    if (cfg.dimension < 2) bad("space.dimension", "must be at least 2");
    if (cfg.space_kind == "hyperbolic" && !(cfg.parameter > 0.0))
        bad("space.parameter", "hyperbolic curvature parameter must be positive");
    if (cfg.space_kind == "custom" && cfg.warp_table.empty())
        bad("space.warp_table", "required for custom spaces");

    if (!(cfg.r_max > 0.0)) bad("grid.r_max", "must be positive");
    if (cfg.n < 8) bad("grid.n", "must be at least 8");

    if (!(cfg.T > 0.0)) bad("time.T", "must be positive");
    if (!(cfg.dt > 0.0)) bad("time.dt", "must be positive");
    if (cfg.T > 0.0 && cfg.dt > 0.0 && cfg.dt > cfg.T)
        bad("time.dt", "must not exceed time.T");

    if (!std::isfinite(cfg.alpha)) bad("pde.alpha", "must be finite");

    const bool q_bump = cfg.q_kind == "gaussian_bump" || cfg.q_kind == "separable";
    if (cfg.q_kind != "zero" && cfg.q_kind != "constant" && !q_bump
        && cfg.q_kind != "tabulated")
        bad("pde.q.kind", "unknown source kind \"" + cfg.q_kind + "\"");
    if (q_bump && !(cfg.q_width > 0.0)) bad("pde.q.width", "must be positive");
    if (cfg.q_kind == "tabulated" && cfg.q_table.empty())
        bad("pde.q.table", "required for tabulated sources");

    if (cfg.initial_kind == "constant") {
        if (!(cfg.initial_value > 0.0)) bad("initial.value", "must be positive");
    } else if (cfg.initial_kind == "gaussian") {
        if (!(cfg.initial_amplitude > 0.0)) bad("initial.amplitude", "must be positive");
        if (!(cfg.initial_width > 0.0)) bad("initial.width", "must be positive");
    } else if (cfg.initial_kind == "bump_plus_constant") {
        if (!(cfg.initial_base > 0.0)) bad("initial.base", "must be positive");
        if (cfg.initial_amplitude < 0.0) bad("initial.amplitude", "must be nonnegative");
        if (!(cfg.initial_width > 0.0)) bad("initial.width", "must be positive");
    } else {
        bad("initial.kind", "unknown initial kind \"" + cfg.initial_kind + "\"");
    }

    if (!(cfg.R > 0.0)) bad("estimate.R", "must be positive");
    else if (cfg.r_max > 0.0 && cfg.R > cfg.r_max / 2 + 1e-12)
        bad("estimate.R", "must not exceed half of grid.r_max");
    if (cfg.D_override && !(*cfg.D_override > 0.0))
        bad("estimate.D_override", "must be positive");
    if (!(cfg.cutoff_a > 0.0 && cfg.cutoff_a < 1.0))
        bad("estimate.cutoff_a", "must lie strictly between 0 and 1");

    bool wants_ode = false, wants_liouville = false;
    for (const std::string& check : cfg.checks) {
        const auto& kinds = known_checks();
        if (std::find(kinds.begin(), kinds.end(), check) == kinds.end())
            bad("checks.list", "unknown check \"" + check + "\"");
        if (check == "ode") wants_ode = true;
        if (check == "liouville_sweep") wants_liouville = true;
    }
    if (wants_ode && cfg.q_kind != "zero" && cfg.q_kind != "constant")
        bad("pde.q.kind", "ode check needs a spatially constant source");
    if (wants_liouville && cfg.r_max < 32.0)
        bad("grid.r_max", "liouville_sweep evaluates radii up to 16 and needs r_max >= 32");

    if (cfg.output_dir.empty()) bad("output.dir", "must not be empty");

    for (const std::string& path : cfg.unknown_keys) bad(path, "unknown key");
    return problems;
}

std::string canonical_text(const Config& cfg) {
    std::ostringstream out;
    out << "space.kind=" << cfg.space_kind << '\n'
        << "space.dimension=" << cfg.dimension << '\n'
        << "space.parameter=" << fmt17(cfg.parameter) << '\n'
        << "space.warp_table=" << cfg.warp_table << '\n'
        << "grid.r_max=" << fmt17(cfg.r_max) << '\n'
        << "grid.n=" << cfg.n << '\n'
        << "time.t0=" << fmt17(cfg.t0) << '\n'
        << "time.T=" << fmt17(cfg.T) << '\n'
        << "time.dt=" << fmt17(cfg.dt) << '\n'
        << "pde.alpha=" << fmt17(cfg.alpha) << '\n'
        << "pde.q.kind=" << cfg.q_kind << '\n'
        << "pde.q.value=" << fmt17(cfg.q_value) << '\n'
        << "pde.q.amplitude=" << fmt17(cfg.q_amplitude) << '\n'
        << "pde.q.center=" << fmt17(cfg.q_center) << '\n'
        << "pde.q.width=" << fmt17(cfg.q_width) << '\n'
        << "pde.q.rate=" << fmt17(cfg.q_rate) << '\n'
        << "pde.q.table=" << cfg.q_table << '\n'
        << "initial.kind=" << cfg.initial_kind << '\n'
        << "initial.value=" << fmt17(cfg.initial_value) << '\n'
        << "initial.amplitude=" << fmt17(cfg.initial_amplitude) << '\n'
        << "initial.center=" << fmt17(cfg.initial_center) << '\n'
        << "initial.width=" << fmt17(cfg.initial_width) << '\n'
        << "initial.base=" << fmt17(cfg.initial_base) << '\n'
        << "estimate.R=" << fmt17(cfg.R) << '\n'
        << "estimate.D_override="
        << (cfg.D_override ? fmt17(*cfg.D_override) : std::string("none")) << '\n'
        << "estimate.cutoff_a=" << fmt17(cfg.cutoff_a) << '\n';
    out << "checks.list=";
    for (std::size_t i = 0; i < cfg.checks.size(); ++i)
        out << (i ? "," : "") << cfg.checks[i];
    out << '\n';
    out << "output.seed=" << (cfg.seed ? std::to_string(*cfg.seed) : std::string("none"))
        << '\n';
    return out.str();
}

std::uint64_t content_hash(const Config& cfg) {
    const std::string text = canonical_text(cfg);
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string content_hash_hex(const Config& cfg) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(content_hash(cfg)));
    return buf;
}

void set_numeric(Config& cfg, const std::string& path, double value) {
    const std::map<std::string, double Config::*> scalars{
        {"space.parameter", &Config::parameter},
        {"grid.r_max", &Config::r_max},
        {"time.t0", &Config::t0},
        {"time.T", &Config::T},
        {"time.dt", &Config::dt},
        {"pde.alpha", &Config::alpha},
        {"pde.q.value", &Config::q_value},
        {"pde.q.amplitude", &Config::q_amplitude},
        {"pde.q.center", &Config::q_center},
        {"pde.q.width", &Config::q_width},
        {"pde.q.rate", &Config::q_rate},
        {"initial.value", &Config::initial_value},
        {"initial.amplitude", &Config::initial_amplitude},
        {"initial.center", &Config::initial_center},
        {"initial.width", &Config::initial_width},
        {"initial.base", &Config::initial_base},
        {"estimate.R", &Config::R},
        {"estimate.cutoff_a", &Config::cutoff_a},
    };
    if (const auto it = scalars.find(path); it != scalars.end()) {
        cfg.*(it->second) = value;
        return;
    }
    if (path == "estimate.D_override") {
        cfg.D_override = value;
        return;
    }
    if (path == "grid.n" || path == "space.dimension") {
        if (value != std::floor(value))
            throw ConfigError(path + ": sweep value must be an integer, got "
                              + fmt17(value));
        if (path == "grid.n") cfg.n = static_cast<int>(value);
        else cfg.dimension = static_cast<int>(value);
        return;
    }
    throw ConfigError(path + ": not a sweepable numeric field");
}

ModelSpace make_space(const Config& cfg) {
    if (cfg.space_kind == "euclidean") return ModelSpace::euclidean(cfg.dimension);
    if (cfg.space_kind == "hyperbolic")
        return ModelSpace::hyperbolic(cfg.dimension, cfg.parameter);
    if (cfg.space_kind == "gaussian_soliton")
        return ModelSpace::gaussian_soliton(cfg.dimension, cfg.parameter);
    if (cfg.space_kind == "custom")
        return ModelSpace::custom(cfg.dimension,
                                  WarpTable::load(cfg.base_dir / cfg.warp_table));
    throw ConfigError("space.kind: unknown space kind \"" + cfg.space_kind + "\"");
}

namespace {

QProfile load_tabulated(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open source table " + path.string());
    std::vector<double> rs, vs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(strip_comment(line));
        if (body.empty() || body == "r,value") continue;
        double r, v;
        char sep = ',';
        std::istringstream ss(body);
        if (!(ss >> r >> sep >> v) || sep != ',')
            throw ParseError(path.string() + " line " + std::to_string(lineno)
                             + ": expected \"r,value\"");
        rs.push_back(r);
        vs.push_back(v);
    }
    return QProfile::tabulated(std::move(rs), std::move(vs));
}

} // namespace

QProfile make_qprofile(const Config& cfg) {
    if (cfg.q_kind == "zero") return QProfile::zero();
    if (cfg.q_kind == "constant") return QProfile::constant(cfg.q_value);
    if (cfg.q_kind == "gaussian_bump")
        return QProfile::gaussian_bump(cfg.q_amplitude, cfg.q_center, cfg.q_width);
    if (cfg.q_kind == "separable")
        return QProfile::separable(cfg.q_amplitude, cfg.q_center, cfg.q_width, cfg.q_rate);
    if (cfg.q_kind == "tabulated") return load_tabulated(cfg.base_dir / cfg.q_table);
    throw ConfigError("pde.q.kind: unknown source kind \"" + cfg.q_kind + "\"");
}

Field make_initial(const Config& cfg, const RadialGrid& grid) {
    Field u(grid.n);
    if (cfg.initial_kind == "constant") {
        std::fill(u.begin(), u.end(), cfg.initial_value);
    } else if (cfg.initial_kind == "gaussian") {
        for (int i = 0; i < grid.n; ++i) {
            const double z = grid.r(i) / cfg.initial_width;
            u[i] = cfg.initial_amplitude * std::exp(-z * z);
        }
    } else if (cfg.initial_kind == "bump_plus_constant") {
        for (int i = 0; i < grid.n; ++i) {
            const double z = (grid.r(i) - cfg.initial_center) / cfg.initial_width;
            u[i] = cfg.initial_base + cfg.initial_amplitude * std::exp(-z * z);
        }
    } else {
        throw ConfigError("initial.kind: unknown initial kind \"" + cfg.initial_kind
                          + "\"");
    }
    return u;
}

PDEProblem make_problem(const Config& cfg) {
    PDEProblem p{make_space(cfg), RadialGrid(cfg.r_max, cfg.n)};
    p.alpha = cfg.alpha;
    p.q = make_qprofile(cfg);
    p.u0 = make_initial(cfg, p.grid);
    p.t0 = cfg.t0;
    p.T = cfg.T;
    p.dt = cfg.dt;
    return p;
}

} // namespace bkl
