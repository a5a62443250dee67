#include "hqclab/cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hqclab/cli/csv.hpp"
#include "hqclab/cli/manifest.hpp"
#include "hqclab/core/error.hpp"
#include "hqclab/core/fit.hpp"
#include "hqclab/core/json_fields.hpp"

namespace hqclab::cli
{
using config::get_or;
using config::get_vec2;
using config::reject_unknown;
using config::require_object;
using nlohmann::json;

namespace
{
struct ExperimentName
{
    Experiment e;
    char const* name;
};

constexpr ExperimentName kNames[] = {
    {Experiment::solve, "solve"},
    {Experiment::measure, "measure"},
    {Experiment::leak_profile, "leak-profile"},
    {Experiment::tail_profile, "tail-profile"},
    {Experiment::moment, "moment"},
    {Experiment::hqc_build, "hqc-build"},
    {Experiment::hqc_distort, "hqc-distort"},
    {Experiment::hqc_k, "hqc-k"},
    {Experiment::tent_check, "tent-check"},
    {Experiment::grad_decay, "grad-decay"},
    {Experiment::grad_uniform, "grad-uniform"},
    {Experiment::improve, "improve"},
    {Experiment::iterate, "iterate"},
    {Experiment::lipschitz, "lipschitz"},
    {Experiment::plot, "plot"},
};

std::string read_file(std::filesystem::path const& p)
{
    std::ifstream is(p, std::ios::binary);
    HQC_REQUIRE(is, ErrorKind::config_invalid, "cannot read " + p.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::filesystem::path resolve(std::filesystem::path const& base, std::string const& file)
{
    std::filesystem::path p(file);
    return p.is_absolute() || base.empty() ? p : base / p;
}

harmonic::Backend parse_backend(std::string const& s, std::string const& path)
{
    for (auto b : {harmonic::Backend::closed_form, harmonic::Backend::poisson_disk,
                   harmonic::Backend::walk_on_spheres, harmonic::Backend::grid})
    {
        if (harmonic::to_string(b) == s)
            return b;
    }
    throw Error(ErrorKind::config_invalid, path + ": unknown backend '" + s + "'");
}

FieldSpec parse_field(json const& j, std::string const& path)
{
    require_object(j, path);
    auto kind = config::require<std::string>(j, "kind", path);
    FieldSpec f;
    if (kind == "linear")
    {
        reject_unknown(j, {"kind", "a", "c"}, path);
        f.kind = FieldSpec::Kind::linear;
        f.a = get_vec2(j, "a", f.a, path);
        f.c = get_or(j, "c", 0.0, path);
    }
    else if (kind == "polar_power" || kind == "power")
    {
        reject_unknown(j, {"kind", "mu"}, path);
        f.kind = kind == "power" ? FieldSpec::Kind::power : FieldSpec::Kind::polar_power;
        f.mu = config::require<double>(j, "mu", path);
        HQC_REQUIRE(f.mu > 0, ErrorKind::config_invalid, path + ".mu: must be positive");
        if (f.kind == FieldSpec::Kind::power)
        {
            HQC_REQUIRE(std::abs(std::cos(f.mu * pi / 2)) > 1e-6, ErrorKind::config_invalid,
                        path + ".mu: odd integers have no power extension");
        }
    }
    else if (kind == "saddle")
    {
        reject_unknown(j, {"kind"}, path);
        f.kind = FieldSpec::Kind::saddle;
    }
    else if (kind == "constant")
    {
        reject_unknown(j, {"kind", "c"}, path);
        f.kind = FieldSpec::Kind::constant;
        f.c = get_or(j, "c", 0.0, path);
    }
    else
    {
        throw Error(ErrorKind::config_invalid, path + ".kind: unknown field kind '" + kind + "'");
    }
    return f;
}

MapSpec parse_map(json& j, std::filesystem::path const& base, std::string const& path)
{
    require_object(j, path);
    auto kind = config::require<std::string>(j, "kind", path);
    MapSpec m;
    if (j.contains("target"))
        m.target = geometry::parse_domain(j.at("target"), path + ".target");
    if (kind == "affine")
    {
        reject_unknown(j, {"kind", "matrix", "offset", "target"}, path);
        m.kind = MapSpec::Kind::affine;
        if (j.contains("matrix"))
        {
            auto rows = get_or<std::vector<std::vector<double>>>(j, "matrix", {}, path);
            HQC_REQUIRE(rows.size() == 2 && rows[0].size() == 2 && rows[1].size() == 2,
                        ErrorKind::config_invalid, path + ".matrix: expected a 2x2 array");
            m.matrix << rows[0][0], rows[0][1], rows[1][0], rows[1][1];
        }
        m.offset = get_vec2(j, "offset", m.offset, path);
        return m;
    }
    m.kind = MapSpec::Kind::boundary;
    auto& b = m.boundary;
    if (kind == "identity")
    {
        reject_unknown(j, {"kind", "nodes", "target"}, path);
        b.kind = hqc::BoundaryMapSpec::Kind::identity;
    }
    else if (kind == "twist")
    {
        reject_unknown(j, {"kind", "epsilon", "nodes", "target"}, path);
        b.kind = hqc::BoundaryMapSpec::Kind::twist;
        b.epsilon = config::require<double>(j, "epsilon", path);
    }
    else if (kind == "fourier")
    {
        reject_unknown(j, {"kind", "terms", "nodes", "target"}, path);
        b.kind = hqc::BoundaryMapSpec::Kind::fourier;
        auto terms = config::require<std::vector<std::vector<double>>>(j, "terms", path);
        for (std::size_t i = 0; i < terms.size(); ++i)
        {
            auto const& t = terms[i];
            HQC_REQUIRE(t.size() == 3 && t[0] == std::round(t[0]), ErrorKind::config_invalid,
                        path + ".terms[" + std::to_string(i) + "]: expected [k, re, im]");
            b.terms.emplace_back(static_cast<int>(t[0]), std::complex<double>(t[1], t[2]));
        }
    }
    else if (kind == "tabulated")
    {
        reject_unknown(j, {"kind", "file", "file_fnv1a", "target"}, path);
        b.kind = hqc::BoundaryMapSpec::Kind::tabulated;
        auto file = resolve(base, config::require<std::string>(j, "file", path));
        auto text = read_file(file);
        auto table = parse_csv(text);
        try
        {
            auto xs = table.numeric("x");
            auto ys = table.numeric("y");
            for (std::size_t i = 0; i < xs.size(); ++i)
                b.table.emplace_back(xs[i], ys[i]);
        }
        catch (Error const& e)
        {
            throw Error(ErrorKind::config_invalid, path + ".file: " + e.what());
        }
        // the table contents are part of the run's inputs
        j["file_fnv1a"] = hex64(fnv1a(text));
    }
    else
    {
        throw Error(ErrorKind::config_invalid, path + ".kind: unknown map kind '" + kind + "'");
    }
    b.nodes = get_or<std::size_t>(j, "nodes", b.nodes, path);
    return m;
}

GridSpec parse_grid(json const& j, std::string const& path)
{
    require_object(j, path);
    reject_unknown(j, {"min", "max", "points"}, path);
    GridSpec g;
    g.min = config::require<double>(j, "min", path);
    g.max = config::require<double>(j, "max", path);
    g.points = get_or<std::size_t>(j, "points", g.points, path);
    HQC_REQUIRE(g.min > 0 && g.max > g.min, ErrorKind::config_invalid,
                path + ": need 0 < min < max");
    HQC_REQUIRE(g.points >= 2, ErrorKind::config_invalid, path + ".points: need at least 2");
    return g;
}

TargetSpec parse_target(json const& j, std::string const& path)
{
    require_object(j, path);
    reject_unknown(j, {"part", "center", "r_min", "r_max", "angle_from", "angle_span"}, path);
    TargetSpec t;
    auto part = get_or<std::string>(j, "part", "any", path);
    if (part == "gamma")
        t.part = geometry::BoundaryPart::gamma;
    else if (part == "sigma")
        t.part = geometry::BoundaryPart::sigma;
    else if (part == "boundary")
        t.part = geometry::BoundaryPart::boundary;
    else
        HQC_REQUIRE(part == "any", ErrorKind::config_invalid,
                    path + ".part: expected gamma, sigma, boundary or any");
    t.center = get_vec2(j, "center", t.center, path);
    t.r_min = get_or(j, "r_min", t.r_min, path);
    t.r_max = get_or(j, "r_max", t.r_max, path);
    t.angle_from = get_or(j, "angle_from", t.angle_from, path);
    t.angle_span = get_or(j, "angle_span", t.angle_span, path);
    return t;
}

RegularitySpec parse_regularity(json const& j, std::string const& path)
{
    require_object(j, path);
    reject_unknown(j,
                   {"alpha", "beta0", "beta_cap", "xi", "boundary_points", "patch_radius",
                    "t_min", "t_points", "path_rho", "pairs", "interior_lattice",
                    "quasiconvex_pairs", "trace_window"},
                   path);
    RegularitySpec r;
    auto& p = r.pipeline;
    if (j.contains("alpha"))
        r.alpha = get_or(j, "alpha", 0.5, path);
    if (j.contains("beta0"))
        r.beta0 = get_or(j, "beta0", 0.5, path);
    r.xi = get_vec2(j, "xi", r.xi, path);
    r.boundary_points = get_or(j, "boundary_points", r.boundary_points, path);
    p.beta_cap = get_or(j, "beta_cap", p.beta_cap, path);
    p.patch_radius = get_or(j, "patch_radius", p.patch_radius, path);
    p.t_min = get_or(j, "t_min", p.t_min, path);
    p.t_points = get_or(j, "t_points", p.t_points, path);
    p.path_rho = get_or(j, "path_rho", p.path_rho, path);
    p.pairs = get_or(j, "pairs", p.pairs, path);
    p.interior_lattice = get_or(j, "interior_lattice", p.interior_lattice, path);
    p.quasiconvex_pairs = get_or(j, "quasiconvex_pairs", p.quasiconvex_pairs, path);
    if (j.contains("trace_window"))
    {
        auto g = parse_grid(j.at("trace_window"), path + ".trace_window");
        p.trace_window = {g.min, g.max, g.points};
    }
    HQC_REQUIRE(r.boundary_points >= 1, ErrorKind::config_invalid,
                path + ".boundary_points: need at least one");
    return r;
}

void need(bool present, Experiment e, char const* block)
{
    HQC_REQUIRE(present, ErrorKind::config_invalid,
                std::string("scenario.") + block + ": required for " + to_string(e));
}
}  // namespace

std::string to_string(Experiment e)
{
    for (auto const& n : kNames)
    {
        if (n.e == e)
            return n.name;
    }
    return "?";
}

std::optional<Experiment> parse_experiment(std::string const& name)
{
    for (auto const& n : kNames)
    {
        if (name == n.name)
            return n.e;
    }
    return std::nullopt;
}

std::vector<Experiment> all_experiments()
{
    std::vector<Experiment> out;
    for (auto const& n : kNames)
        out.push_back(n.e);
    return out;
}

double FieldSpec::value(Vec2 const& x) const
{
    switch (kind)
    {
        case Kind::linear: return a.dot(x) + c;
        case Kind::polar_power:
            return std::pow(x.norm(), mu) * std::cos(mu * std::atan2(x.y(), x.x()));
        case Kind::saddle: return x.x() * x.x() - x.y() * x.y();
        case Kind::constant: return c;
        case Kind::power:
        {
            double th = std::atan2(x.y(), x.x());
            return std::pow(x.norm(), mu) * std::cos(mu * (th - pi / 2)) / std::cos(mu * pi / 2);
        }
    }
    return 0;
}

Vec2 FieldSpec::gradient(Vec2 const& x) const
{
    switch (kind)
    {
        case Kind::linear: return a;
        case Kind::saddle: return {2 * x.x(), -2 * x.y()};
        case Kind::constant: return Vec2::Zero();
        case Kind::polar_power:
        case Kind::power:
        {
            // u = Re(k e^{i mu phi} z^mu), grad u = conj of the derivative
            double th = std::atan2(x.y(), x.x());
            double phi = kind == Kind::power ? -pi / 2 : 0.0;
            double k = kind == Kind::power ? 1 / std::cos(mu * pi / 2) : 1.0;
            double g = k * mu * std::pow(x.norm(), mu - 1);
            double ang = (mu - 1) * th + mu * phi;
            return {g * std::cos(ang), -g * std::sin(ang)};
        }
    }
    return Vec2::Zero();
}

std::string FieldSpec::describe() const
{
    std::ostringstream os;
    switch (kind)
    {
        case Kind::linear: os << "linear(" << a.x() << ", " << a.y() << "; " << c << ")"; break;
        case Kind::polar_power: os << "polar_power(" << mu << ")"; break;
        case Kind::saddle: os << "saddle"; break;
        case Kind::constant: os << "constant(" << c << ")"; break;
        case Kind::power: os << "power(" << mu << ")"; break;
    }
    return os.str();
}

std::string MapSpec::describe() const
{
    if (kind == Kind::boundary)
        return boundary.describe();
    std::ostringstream os;
    os << "affine[[" << matrix(0, 0) << ", " << matrix(0, 1) << "], [" << matrix(1, 0) << ", "
       << matrix(1, 1) << "]]";
    return os.str();
}

std::vector<double> GridSpec::values() const
{
    return geometric_grid(min, max, points);
}

Scenario parse_scenario(json const& input, std::filesystem::path const& base_dir)
{
    std::string const root = "scenario";
    require_object(input, root);
    json j = input;
    reject_unknown(j,
                   {"schema_version", "experiment", "seed", "threads", "domain", "solver",
                    "field", "map", "patch", "grid", "points", "target", "pole", "mu",
                    "certificate", "regularity", "lattice", "plot"},
                   root);
    auto version = config::require<int>(j, "schema_version", root);
    HQC_REQUIRE(version == kSchemaVersion, ErrorKind::config_invalid,
                root + ".schema_version: expected " + std::to_string(kSchemaVersion) + ", got "
                    + std::to_string(version));

    Scenario s;
    auto name = config::require<std::string>(j, "experiment", root);
    auto e = parse_experiment(name);
    HQC_REQUIRE(e, ErrorKind::config_invalid,
                root + ".experiment: unknown experiment '" + name + "'");
    s.experiment = *e;
    s.seed = get_or<std::uint64_t>(j, "seed", s.seed, root);
    if (j.contains("threads"))
        s.threads = get_or<std::size_t>(j, "threads", 0, root);

    if (j.contains("domain"))
        s.domain = geometry::parse_domain(j.at("domain"), root + ".domain");
    if (j.contains("solver"))
    {
        auto const& js = j.at("solver");
        std::string path = root + ".solver";
        require_object(js, path);
        reject_unknown(js, {"backend", "eps_shell", "walks", "max_steps", "grid_h"}, path);
        if (js.contains("backend"))
            s.solver.backend = parse_backend(get_or<std::string>(js, "backend", "", path),
                                             path + ".backend");
        if (js.contains("eps_shell"))
            s.solver.eps_shell = get_or(js, "eps_shell", 1e-4, path);
        s.solver.n_walks = get_or(js, "walks", s.solver.n_walks, path);
        s.solver.max_steps = get_or(js, "max_steps", s.solver.max_steps, path);
        s.solver.grid_h = get_or(js, "grid_h", s.solver.grid_h, path);
        HQC_REQUIRE(s.solver.n_walks > 0 && s.solver.grid_h > 0
                        && (!s.solver.eps_shell || *s.solver.eps_shell > 0),
                    ErrorKind::config_invalid, path + ": walks, grid_h and eps_shell must be positive");
    }
    if (j.contains("field"))
        s.field = parse_field(j.at("field"), root + ".field");
    if (j.contains("map"))
        s.map = parse_map(j.at("map"), base_dir, root + ".map");
    if (j.contains("patch"))
    {
        auto const& jp = j.at("patch");
        std::string path = root + ".patch";
        require_object(jp, path);
        reject_unknown(jp, {"center", "radius", "collar"}, path);
        PatchSpec p;
        p.center = get_vec2(jp, "center", p.center, path);
        p.radius = get_or(jp, "radius", p.radius, path);
        if (jp.contains("collar"))
            p.collar = get_or(jp, "collar", 0.45, path);
        HQC_REQUIRE(p.radius > 0, ErrorKind::config_invalid, path + ".radius: must be positive");
        s.patch = p;
    }
    if (j.contains("grid"))
        s.grid = parse_grid(j.at("grid"), root + ".grid");
    if (j.contains("points"))
    {
        auto pts = get_or<std::vector<std::vector<double>>>(j, "points", {}, root);
        for (std::size_t i = 0; i < pts.size(); ++i)
            s.points.push_back(config::to_vec2(pts[i], root + ".points[" + std::to_string(i) + "]"));
    }
    if (j.contains("target"))
        s.target = parse_target(j.at("target"), root + ".target");
    if (j.contains("pole"))
        s.pole = get_vec2(j, "pole", Vec2::Zero(), root);
    s.mu = get_or(j, "mu", s.mu, root);
    if (j.contains("certificate"))
    {
        auto const& jc = j.at("certificate");
        std::string path = root + ".certificate";
        require_object(jc, path);
        reject_unknown(jc, {"exponent", "constant", "sup_norm", "base_value"}, path);
        auto& c = s.certificate;
        c.exponent = config::require<double>(jc, "exponent", path);
        c.constant = get_or(jc, "constant", c.constant, path);
        c.sup_norm = get_or(jc, "sup_norm", c.sup_norm, path);
        c.base_value = get_or(jc, "base_value", c.base_value, path);
    }
    if (j.contains("regularity"))
        s.regularity = parse_regularity(j.at("regularity"), root + ".regularity");
    if (j.contains("lattice"))
    {
        auto const& jl = j.at("lattice");
        std::string path = root + ".lattice";
        require_object(jl, path);
        reject_unknown(jl, {"n", "min_depth"}, path);
        s.lattice.n = get_or(jl, "n", s.lattice.n, path);
        s.lattice.min_depth = get_or(jl, "min_depth", s.lattice.min_depth, path);
        HQC_REQUIRE(s.lattice.n >= 2, ErrorKind::config_invalid, path + ".n: need at least 2");
    }
    if (j.contains("plot"))
    {
        auto& jp = j.at("plot");
        std::string path = root + ".plot";
        if (jp.is_boolean())
        {
            s.plot = jp.get<bool>();
        }
        else
        {
            require_object(jp, path);
            reject_unknown(jp, {"csv", "x", "y", "csv_fnv1a"}, path);
            PlotSpec p;
            p.csv = resolve(base_dir, config::require<std::string>(jp, "csv", path));
            p.x = config::require<std::string>(jp, "x", path);
            p.y = config::require<std::string>(jp, "y", path);
            jp["csv_fnv1a"] = hex64(fnv1a(read_file(p.csv)));
            s.plot_input = p;
            s.plot = true;
        }
    }

    // required blocks per experiment
    auto const x = s.experiment;
    switch (x)
    {
        case Experiment::solve:
            need(s.domain.has_value(), x, "domain");
            need(s.field.has_value(), x, "field");
            need(!s.points.empty(), x, "points");
            break;
        case Experiment::measure:
            need(s.domain.has_value(), x, "domain");
            need(s.target.has_value(), x, "target");
            need(!s.points.empty(), x, "points");
            break;
        case Experiment::leak_profile:
            need(s.domain.has_value(), x, "domain");
            need(s.grid.has_value(), x, "grid");
            break;
        case Experiment::tail_profile:
            need(s.domain.has_value(), x, "domain");
            need(s.grid.has_value(), x, "grid");
            need(s.pole.has_value(), x, "pole");
            break;
        case Experiment::moment:
            need(s.domain.has_value(), x, "domain");
            need(s.pole.has_value(), x, "pole");
            break;
        case Experiment::hqc_build:
        case Experiment::hqc_distort:
        case Experiment::hqc_k:
            need(s.map.has_value(), x, "map");
            break;
        case Experiment::tent_check:
        case Experiment::grad_decay:
        case Experiment::grad_uniform:
            need(s.domain.has_value(), x, "domain");
            need(s.field.has_value(), x, "field");
            need(s.grid.has_value(), x, "grid");
            need(j.contains("certificate"), x, "certificate");
            break;
        case Experiment::improve:
        case Experiment::lipschitz:
            need(s.map.has_value(), x, "map");
            need(s.map->target.has_value(), x, "map.target");
            need(s.regularity.alpha.has_value(), x, "regularity.alpha");
            break;
        case Experiment::iterate:
            need(s.regularity.alpha.has_value(), x, "regularity.alpha");
            need(s.regularity.beta0.has_value(), x, "regularity.beta0");
            break;
        case Experiment::plot:
            need(s.plot_input.has_value(), x, "plot");
            break;
    }

    s.canonical = std::move(j);
    s.canonical["seed"] = s.seed;
    return s;
}

Scenario load_scenario(std::filesystem::path const& file)
{
    auto text = read_file(file);
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (json::exception const& e)
    {
        throw Error(ErrorKind::config_invalid, file.string() + ": " + e.what());
    }
    return parse_scenario(j, file.parent_path());
}

std::string scenario_hash(Scenario const& s)
{
    json j = s.canonical;
    j.erase("threads");  // results do not depend on the worker count
    return hex64(fnv1a(j.dump()));
}

}  // namespace hqclab::cli
