#include "hqclab/cli/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hqclab/cli/csv.hpp"
#include "hqclab/cli/plot.hpp"
#include "hqclab/core/parallel.hpp"
#include "hqclab/geometry/patch.hpp"
#include "hqclab/harmonic/grid.hpp"
#include "hqclab/harmonic/measure.hpp"
#include "hqclab/harmonic/poisson.hpp"
#include "hqclab/harmonic/walk.hpp"
#include "hqclab/hqc/map.hpp"
#include "hqclab/hqc/rotated.hpp"
#include "hqclab/regularity/certificate.hpp"
#include "hqclab/regularity/improvement.hpp"
#include "hqclab/regularity/iteration.hpp"
#include "hqclab/regularity/lemmas.hpp"
#include "hqclab/regularity/pipeline.hpp"

namespace hqclab::cli
{
namespace
{
using geometry::BoundaryPatch;
using geometry::DomainKind;
using harmonic::Backend;
using PatchPtr = std::shared_ptr<BoundaryPatch const>;
using RegionPtr = std::shared_ptr<geometry::Region const>;

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string fmt(Vec2 const& v)
{
    return "(" + fmt(v.x()) + ", " + fmt(v.y()) + ")";
}

std::string pass_fail(bool ok)
{
    return ok ? "PASS" : "FAIL";
}

//! Accumulates the run's outputs.
struct Run
{
    Scenario const& s;
    std::ostringstream summary;
    std::vector<StageOutcome> stages;
    std::vector<Artifact> artifacts;

    void line(std::string const& key, std::string const& value)
    {
        summary << key << ": " << value << '\n';
    }
    void stage(std::string name, bool passed, std::string detail)
    {
        summary << "stage " << name << ": " << pass_fail(passed) << " (" << detail << ")\n";
        stages.push_back({std::move(name), passed, std::move(detail)});
    }
    void csv(Table const& table, char const* x = nullptr, char const* y = nullptr)
    {
        artifacts.push_back({to_string(s.experiment) + ".csv", table.to_csv()});
        if (!s.plot)
            return;
        HQC_REQUIRE(x && y, ErrorKind::config_invalid,
                    "scenario.plot: " + to_string(s.experiment) + " has no profile to plot");
        auto plot = emit_plot(table, x, y, to_string(s.experiment));
        line("plot slope", fmt(plot.fit.exponent));
        artifacts.push_back({to_string(s.experiment) + ".svg", plot.svg});
    }
};

//---------------------------------------------------------------------------//
// Builders

harmonic::SolverParams solver_params(Scenario const& s, geometry::Region const& region)
{
    harmonic::SolverParams p;
    p.eps_shell = s.solver.eps_shell.value_or(harmonic::default_eps_shell(region));
    p.max_steps = s.solver.max_steps;
    p.n_walks = s.solver.n_walks;
    p.seed = s.seed;
    p.grid_h = s.solver.grid_h;
    p.validate();
    return p;
}

RegionPtr solver_region(geometry::DomainSpec const& d, Backend backend)
{
    if (d.kind == DomainKind::half_plane && backend == Backend::closed_form)
        return std::make_shared<geometry::PlanarDomain const>(geometry::PlanarDomain::half_plane());
    return geometry::make_region(d);
}

PatchPtr make_patch(Scenario const& s)
{
    auto const& d = *s.domain;
    if (d.kind == DomainKind::half_disk && !s.patch)
        return std::make_shared<BoundaryPatch const>(geometry::half_disk_patch(d.radius));
    HQC_REQUIRE(s.patch, ErrorKind::config_invalid,
                "scenario.patch: required for " + to_string(s.experiment) + " on this domain");
    return std::make_shared<BoundaryPatch const>(geometry::build_patch(
        geometry::make_domain(d), s.patch->center, s.patch->radius, s.patch->collar));
}

harmonic::FieldPtr make_field(FieldSpec const& f,
                              RegionPtr region,
                              Backend backend,
                              harmonic::SolverParams const& params,
                              geometry::DomainSpec const* domain)
{
    auto data = [f](geometry::BoundaryHit const& hit) { return f.value(hit.point); };
    switch (backend)
    {
        case Backend::closed_form:
            return std::make_shared<harmonic::ClosedFormField>(
                region, [f](Vec2 const& x) { return f.value(x); },
                [f](Vec2 const& x) { return f.gradient(x); }, f.describe());
        case Backend::walk_on_spheres:
            return std::make_shared<harmonic::WalkOnSpheresField>(region, data, params,
                                                                  "wos " + f.describe());
        case Backend::grid:
            return std::make_shared<harmonic::GridField>(
                harmonic::grid_solve(region, data, params.grid_h));
        case Backend::poisson_disk:
        {
            HQC_REQUIRE(domain && domain->kind == DomainKind::disk && domain->radius == 1
                            && domain->center == Vec2::Zero(),
                        ErrorKind::config_invalid,
                        "scenario.solver.backend: poisson_disk needs the unit disk");
            auto disk = harmonic::PoissonDisk::from_function(
                [f](double th) { return f.value({std::cos(th), std::sin(th)}); }, 2048);
            return std::make_shared<harmonic::PoissonDiskField>(std::move(disk));
        }
    }
    return nullptr;
}

std::shared_ptr<hqc::HarmonicMap const> make_map(Scenario const& s)
{
    auto const& m = *s.map;
    std::optional<geometry::PlanarDomain> target;
    if (m.target)
        target = geometry::make_domain(*m.target);
    if (m.kind == MapSpec::Kind::affine)
    {
        RegionPtr source = s.domain ? geometry::make_region(*s.domain)
                                    : std::make_shared<geometry::PlanarDomain const>(
                                        geometry::PlanarDomain::disk());
        return std::make_shared<hqc::HarmonicMap const>(
            hqc::affine_map(source, m.matrix, m.offset, target, m.describe()));
    }
    return std::make_shared<hqc::HarmonicMap const>(hqc::poisson_extension(m.boundary, target));
}

regularity::BasepointHolderCert make_certificate(Scenario const& s, PatchPtr patch)
{
    regularity::BasepointHolderCert c;
    c.patch = std::move(patch);
    c.exponent = s.certificate.exponent;
    c.constant = s.certificate.constant;
    c.sup_norm = s.certificate.sup_norm;
    c.base_value = s.certificate.base_value;
    return c;
}

std::int64_t walks_of(Backend b, harmonic::SolverParams const& p)
{
    return b == Backend::walk_on_spheres ? static_cast<std::int64_t>(p.n_walks) : 0;
}

void describe_fit(Run& run, std::string const& key, ExponentFit const& fit)
{
    run.line(key, fmt(fit.exponent) + " +- " + fmt(fit.exponent_std_error) + " over ["
                      + fmt(fit.t_min) + ", " + fmt(fit.t_max) + "], r2 " + fmt(fit.r2));
}

//---------------------------------------------------------------------------//
// Harmonic experiments

void run_solve(Run& run)
{
    auto const& s = run.s;
    auto backend = s.solver.backend.value_or(Backend::closed_form);
    auto region = solver_region(*s.domain, backend);
    auto params = solver_params(s, *region);
    auto field = make_field(*s.field, region, backend, params, &*s.domain);
    run.line("field", field->describe());
    run.line("backend", harmonic::to_string(backend));

    std::vector<Estimate> values(s.points.size());
    for (std::size_t i = 0; i < s.points.size(); ++i)
    {
        HQC_REQUIRE(region->contains(s.points[i]), ErrorKind::invalid_argument,
                    "point " + fmt(s.points[i]) + " lies outside the region");
        values[i] = field->value(s.points[i]);
    }
    Table t({"x", "y", "value", "std_error", "n_walks"});
    for (std::size_t i = 0; i < s.points.size(); ++i)
    {
        t.add_row({s.points[i].x(), s.points[i].y(), values[i].value, values[i].std_error,
                   walks_of(backend, params)});
    }
    run.csv(t);
}

void run_measure(Run& run)
{
    auto const& s = run.s;
    auto backend = s.solver.backend.value_or(Backend::walk_on_spheres);
    auto region = geometry::make_region(*s.domain);
    auto params = solver_params(s, *region);
    harmonic::BoundaryTarget target;
    target.part = s.target->part;
    target.center = s.target->center;
    target.r_min = s.target->r_min;
    target.r_max = s.target->r_max;
    target.angle_from = s.target->angle_from;
    target.angle_span = s.target->angle_span;
    run.line("target", target.describe());
    run.line("backend", harmonic::to_string(backend));

    Table t({"x", "y", "value", "std_error", "n_walks"});
    for (auto const& y : s.points)
    {
        auto m = harmonic::harmonic_measure(*region, y, target, params, backend);
        t.add_row({y.x(), y.y(), m.value, m.std_error, static_cast<std::int64_t>(m.n_walks)});
    }
    run.csv(t);
}

void run_leak(Run& run)
{
    auto const& s = run.s;
    auto backend = s.solver.backend.value_or(Backend::walk_on_spheres);
    auto patch = make_patch(s);
    auto params = solver_params(s, *patch);
    auto grid = s.grid->values();
    auto profile = harmonic::sigma_leak_profile(*patch, grid, params, backend);
    run.line("patch", patch->describe());
    run.line("backend", harmonic::to_string(backend));
    run.line("through-origin slope", fmt(profile.slope));
    describe_fit(run, "fitted exponent", profile.fit);

    Table t({"t", "value", "std_error", "n_walks"});
    for (auto const& p : profile.points)
    {
        t.add_row({p.x, p.measure.value, p.measure.std_error,
                   static_cast<std::int64_t>(p.measure.n_walks)});
    }
    run.stage("sigma-leak", profile.passed(),
              std::to_string(profile.outliers) + " points above the linear fit by 5 sigma");
    run.csv(t, "t", "value");
}

void run_tail(Run& run)
{
    auto const& s = run.s;
    auto backend = s.solver.backend.value_or(Backend::walk_on_spheres);
    auto patch = make_patch(s);
    auto params = solver_params(s, *patch);
    auto grid = s.grid->values();
    auto profile = harmonic::gamma_tail_profile(*patch, *s.pole, grid, params, backend);
    run.line("patch", patch->describe());
    run.line("pole", fmt(*s.pole));
    run.line("delta", fmt(profile.delta));
    run.line("max F(s) s / delta", fmt(profile.constant));

    Table t({"s", "value", "std_error", "n_walks", "scaled"});
    for (auto const& p : profile.points)
    {
        t.add_row({p.x, p.measure.value, p.measure.std_error,
                   static_cast<std::int64_t>(p.measure.n_walks),
                   p.measure.value * p.x / profile.delta});
    }
    run.stage("tail-monotone", profile.monotone, "F(s) non-increasing within error");
    run.csv(t, "s", "value");
}

void run_moment(Run& run)
{
    auto const& s = run.s;
    auto backend = s.solver.backend.value_or(Backend::walk_on_spheres);
    auto patch = make_patch(s);
    auto params = solver_params(s, *patch);
    auto r = harmonic::layer_cake_moment(*patch, *s.pole, s.mu, params, backend);
    run.line("patch", patch->describe());
    run.line("pole", fmt(*s.pole));
    run.line("mu", fmt(s.mu));
    run.line("delta", fmt(r.delta));

    auto n = walks_of(backend, params);
    Table t({"quantity", "value", "std_error", "n_walks"});
    t.add_row({std::string("direct"), r.direct.value, r.direct.std_error, n});
    t.add_row({std::string("quadrature"), r.quadrature.value, r.quadrature.std_error, n});
    t.add_row({std::string("gamma_measure"), r.gamma_measure.value, r.gamma_measure.std_error, n});
    run.stage("layer-cake", r.agree,
              "|direct - quadrature| = " + fmt(std::abs(r.direct.value - r.quadrature.value))
                  + ", 3 sigma = " + fmt(3 * r.sigma));
    run.csv(t);
}

//---------------------------------------------------------------------------//
// Maps

void run_hqc_build(Run& run)
{
    auto const& s = run.s;
    HQC_REQUIRE(s.map->kind == MapSpec::Kind::boundary, ErrorKind::config_invalid,
                "scenario.map.kind: hqc-build needs a boundary map");
    auto const& spec = s.map->boundary;
    auto samples = spec.sample();
    // validates injectivity and resolution
    auto map = hqc::poisson_extension(samples, std::nullopt, spec.describe());
    run.line("map", map.name());
    run.line("nodes", std::to_string(samples.size()));
    run.line("x tail ratio",
             fmt(dynamic_cast<harmonic::PoissonDiskField const&>(map.component(0)).disk().tail_ratio()));
    run.line("y tail ratio",
             fmt(dynamic_cast<harmonic::PoissonDiskField const&>(map.component(1)).disk().tail_ratio()));

    Table t({"theta", "x", "y"});
    for (std::size_t j = 0; j < samples.size(); ++j)
    {
        t.add_row({two_pi * static_cast<double>(j) / static_cast<double>(samples.size()),
                   samples[j].x(), samples[j].y()});
    }
    run.csv(t);
}

std::vector<Vec2> map_lattice(Scenario const& s, hqc::HarmonicMap const& map, int n)
{
    return hqc::lattice_points(map.source(), n, s.lattice.min_depth);
}

void run_hqc_distort(Run& run)
{
    auto const& s = run.s;
    auto map = make_map(s);
    auto points = map_lattice(s, *map, s.lattice.n);
    auto k = hqc::qc_constant(*map, points);
    run.line("map", map->name());
    run.line("points", std::to_string(points.size()));
    run.line("K", fmt(k.k));
    run.line("worst point", fmt(k.worst));

    Table t({"x", "y", "df11", "df12", "df21", "df22", "sigma_max", "sigma_min", "jacobian",
             "distortion"});
    std::size_t violations = 0;
    for (auto const& d : k.samples)
    {
        t.add_row({d.x.x(), d.x.y(), d.df(0, 0), d.df(0, 1), d.df(1, 0), d.df(1, 1),
                   d.sigma_max, d.sigma_min, d.jacobian, d.distortion});
        if (!hqc::distortion_check(d, k.k).passed())
            ++violations;
    }
    run.stage("distortion", violations == 0,
              std::to_string(violations) + " samples violate |Df| <= H(K) l(Df) or l(Df) <= |row|");
    run.csv(t);
}

void run_hqc_k(Run& run)
{
    auto const& s = run.s;
    auto map = make_map(s);
    run.line("map", map->name());
    Table t({"lattice", "points", "k", "worst_x", "worst_y"});
    double k_last = 0;
    for (int n = s.lattice.n; n <= 4 * s.lattice.n; n *= 2)
    {
        auto points = map_lattice(s, *map, n);
        auto k = hqc::qc_constant(*map, points);
        t.add_row({std::int64_t{n}, static_cast<std::int64_t>(points.size()), k.k, k.worst.x(),
                   k.worst.y()});
        k_last = k.k;
    }
    run.line("K", fmt(k_last));
    run.csv(t);
}

//---------------------------------------------------------------------------//
// Tent and gradient checks

struct ProfileSetup
{
    PatchPtr patch;
    harmonic::FieldPtr field;
    regularity::BasepointHolderCert cert;
    std::vector<double> grid;
};

ProfileSetup profile_setup(Run& run)
{
    auto const& s = run.s;
    ProfileSetup l;
    l.patch = make_patch(s);
    auto backend = s.solver.backend.value_or(Backend::closed_form);
    auto params = solver_params(s, *l.patch);
    l.field = make_field(*s.field, l.patch, backend, params, &*s.domain);
    l.cert = make_certificate(s, l.patch);
    l.grid = s.grid->values();
    run.line("patch", l.patch->describe());
    run.line("field", l.field->describe());
    run.line("backend", harmonic::to_string(backend));
    run.line("certificate", "mu " + fmt(l.cert.exponent) + ", M " + fmt(l.cert.constant) + ", A "
                                + fmt(l.cert.sup_norm));
    return l;
}

void run_tent(Run& run)
{
    auto l = profile_setup(run);
    auto r = regularity::tent_check(l.cert, *l.field, l.grid);
    describe_fit(run, "fitted exponent", r.fit);
    run.line("max sup / t^mu", fmt(r.max_ratio));
    run.line("C hat", fmt(r.c_hat));
    run.line("in scope", r.in_scope ? "yes" : "no");

    Table t({"t", "sup", "ratio", "samples"});
    for (auto const& row : r.rows)
        t.add_row({row.t, row.sup, row.ratio, static_cast<std::int64_t>(row.samples)});
    run.stage("tent", r.passed,
              "exponent " + fmt(r.fit.exponent) + " against mu " + fmt(l.cert.exponent));
    run.csv(t, "t", "sup");
}

void gradient_rows(Run& run, regularity::GradientProfile const& g, char const* name)
{
    describe_fit(run, "fitted exponent", g.fit);
    run.line("target exponent", fmt(g.target));
    run.line("max |grad u|", fmt(g.max_norm));
    run.line("C hat", fmt(g.c_hat));
    run.line("in scope", g.in_scope ? "yes" : "no");

    Table t({"t", "grad_norm", "std_error"});
    for (auto const& row : g.rows)
        t.add_row({row.t, row.norm, row.std_error});
    run.stage(name, g.passed,
              "exponent " + fmt(g.fit.exponent) + " against " + fmt(g.target));
    run.csv(t, "t", "grad_norm");
}

void run_grad_decay(Run& run)
{
    auto l = profile_setup(run);
    gradient_rows(run, regularity::gradient_decay_check(l.cert, *l.field, l.grid), "grad-decay");
}

void run_grad_uniform(Run& run)
{
    auto l = profile_setup(run);
    gradient_rows(run, regularity::uniform_gradient_check(l.cert, *l.field, l.grid),
                  "grad-uniform");
}

//---------------------------------------------------------------------------//
// Regularity pipeline

void run_improve(Run& run)
{
    auto const& s = run.s;
    auto map = make_map(s);
    auto const* disk = dynamic_cast<geometry::PlanarDomain const*>(&map->source());
    HQC_REQUIRE(disk && !disk->is_half_plane(), ErrorKind::config_invalid,
                "scenario.map: improve needs a bounded source domain");
    auto const& reg = s.regularity;
    auto const& opt = reg.pipeline;
    Vec2 xi = reg.xi;
    Vec2 f_xi = map->trace(xi).value;
    auto samples = regularity::sample_trace(
        *disk, xi, [&](Vec2 const& eta) { return (map->trace(eta).value - f_xi).norm(); },
        opt.trace_window);
    auto patch = std::make_shared<BoundaryPatch const>(
        geometry::build_patch(*disk, xi, opt.patch_radius));
    double beta0 = reg.beta0.value_or(0);
    if (!reg.beta0)
    {
        auto fitted = regularity::trace_holder_fit(samples, patch, 0.0);
        beta0 = std::min(fitted.fit.exponent, opt.beta_cap);
        run.line("beta0 note", "fitted trace exponent " + fmt(fitted.fit.exponent)
                                   + ", capped at " + fmt(opt.beta_cap));
    }
    auto trace = regularity::trace_holder_fit(samples, patch, 0.0, 0.0, beta0);
    auto rotated = hqc::rotate_to_chart(map, xi, std::nullopt, 512, reg.alpha);
    auto cert = regularity::normal_trace_improvement(rotated, trace);

    run.line("map", map->name());
    run.line("xi", fmt(xi));
    run.line("alpha", fmt(cert.alpha));
    run.line("beta0", fmt(cert.beta0));
    run.line("C0", fmt(cert.c0));
    run.line("C_Omega", fmt(cert.c_omega));
    run.line("beta1", fmt(cert.beta1));
    run.line("C1", fmt(cert.c1));
    run.line("max |F_n| / d^beta1", fmt(cert.max_quotient));
    run.line("chart residual", fmt(cert.residual));

    Table t({"eta_x", "eta_y", "distance", "normal", "bound", "tolerance"});
    for (auto const& b : rotated.samples())
    {
        double d = (b.eta - xi).norm();
        if (d <= 0 || d > trace.fit.t_max)
            continue;
        t.add_row({b.eta.x(), b.eta.y(), d, std::abs(b.image.y()),
                   cert.c1 * std::pow(d, cert.beta1), b.tolerance});
    }
    run.stage("normal-trace", cert.passed(),
              std::to_string(cert.violations) + " of " + std::to_string(cert.samples)
                  + " samples above C1 d^beta1");
    run.csv(t, "distance", "normal");
}

void run_iterate(Run& run)
{
    auto const& reg = run.s.regularity;
    auto it = regularity::exponent_iteration(*reg.alpha, *reg.beta0);
    run.line("alpha", fmt(it.alpha));
    run.line("beta0 requested", fmt(it.beta0_requested));
    run.line("endpoint shift", fmt(it.endpoint_shift));
    run.line("m0", std::to_string(it.m0));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", it.beta.back());
    run.line("beta_m0", buf);

    Table t({"m", "beta"});
    for (std::size_t m = 0; m < it.beta.size(); ++m)
        t.add_row({static_cast<std::int64_t>(m), it.beta[m]});
    run.csv(t);
}

void run_lipschitz(Run& run)
{
    auto const& s = run.s;
    auto map = make_map(s);
    auto options = s.regularity.pipeline;
    options.alpha = *s.regularity.alpha;
    options.seed = s.seed;
    run.line("map", map->name());

    Table t({"m", "beta", "check", "xi_x", "xi_y", "exponent", "target", "constant", "passed"});
    regularity::LipschitzReport r;
    try
    {
        r = regularity::lipschitz_pipeline(map, regularity::circle_points(s.regularity.boundary_points),
                                           options);
    }
    catch (Error const& e)
    {
        if (e.kind() == ErrorKind::stage_failure)
            run.stage("pipeline", false, e.what());
        throw;
    }
    run.line("note", r.seed_note);
    run.line("beta0 fitted", fmt(r.beta0_fitted));
    run.line("beta0 seed", fmt(r.beta0_seed));
    run.line("m0", std::to_string(r.iteration.m0));
    run.line("K", fmt(r.k));
    run.line("collar bound C*", fmt(r.collar_bound));
    run.line("delta*", fmt(r.delta_star));
    run.line("interior bound", fmt(r.interior_bound));
    run.line("sup |Df|", fmt(r.sup_df));
    run.line("C_D", fmt(r.quasiconvexity));
    run.line("L hat", fmt(r.lipschitz));
    run.line("direct quotient", fmt(r.direct_quotient));

    for (auto const& st : r.stages)
    {
        t.add_row({static_cast<std::int64_t>(st.m), st.beta, st.check, st.xi.x(), st.xi.y(),
                   st.exponent, st.target, st.constant, std::int64_t{st.passed ? 1 : 0}});
    }
    std::size_t failed = 0;
    for (auto const& st : r.stages)
        failed += st.passed ? 0 : 1;
    run.stage("stages", failed == 0,
              std::to_string(r.stages.size() - failed) + " of " + std::to_string(r.stages.size())
                  + " checks pass");
    run.stage("cross-validation", r.cross_valid,
              "direct " + fmt(r.direct_quotient) + " <= 1.05 L " + fmt(1.05 * r.lipschitz));
    run.csv(t);
}

void run_plot(Run& run)
{
    auto const& p = *run.s.plot_input;
    std::ifstream is(p.csv, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    auto table = parse_csv(os.str());
    auto plot = emit_plot(table, p.x, p.y, p.csv.filename().string());
    run.line("input", p.csv.filename().string());
    run.line("rows", std::to_string(table.size()));
    describe_fit(run, "fitted slope", plot.fit);
    run.artifacts.push_back({"plot.svg", plot.svg});
}

void dispatch(Run& run)
{
    switch (run.s.experiment)
    {
        case Experiment::solve: return run_solve(run);
        case Experiment::measure: return run_measure(run);
        case Experiment::leak_profile: return run_leak(run);
        case Experiment::tail_profile: return run_tail(run);
        case Experiment::moment: return run_moment(run);
        case Experiment::hqc_build: return run_hqc_build(run);
        case Experiment::hqc_distort: return run_hqc_distort(run);
        case Experiment::hqc_k: return run_hqc_k(run);
        case Experiment::tent_check: return run_tent(run);
        case Experiment::grad_decay: return run_grad_decay(run);
        case Experiment::grad_uniform: return run_grad_uniform(run);
        case Experiment::improve: return run_improve(run);
        case Experiment::iterate: return run_iterate(run);
        case Experiment::lipschitz: return run_lipschitz(run);
        case Experiment::plot: return run_plot(run);
    }
}

constexpr ErrorKind kAllKinds[] = {
    ErrorKind::config_invalid,
    ErrorKind::stage_failure,
    ErrorKind::non_unique_projection,
    ErrorKind::outside_tubular,
    ErrorKind::degenerate_tangent,
    ErrorKind::radius_too_large,
    ErrorKind::patch_degenerate,
    ErrorKind::path_leaves_domain,
    ErrorKind::tubular_violation,
    ErrorKind::invalid_curve,
    ErrorKind::max_steps_exceeded,
    ErrorKind::quadrature_unstable,
    ErrorKind::step_too_large,
    ErrorKind::solver_diverged,
    ErrorKind::grid_too_coarse,
    ErrorKind::not_injective,
    ErrorKind::quadrature_under_resolved,
    ErrorKind::jacobian_non_positive,
    ErrorKind::trace_outside_chart,
    ErrorKind::window_too_narrow,
    ErrorKind::non_finite_trace,
    ErrorKind::chart_residual_too_large,
    ErrorKind::endpoint_exponent,
    ErrorKind::non_positive_data,
    ErrorKind::invalid_argument,
};
}  // namespace

//---------------------------------------------------------------------------//
Artifact const* RunResult::find(std::string const& name) const
{
    for (auto const& a : artifacts)
    {
        if (a.name == name)
            return &a;
    }
    return nullptr;
}

std::string const& RunResult::csv() const
{
    static std::string const empty;
    for (auto const& a : artifacts)
    {
        if (a.name.ends_with(".csv"))
            return a.content;
    }
    return empty;
}

std::string const& RunResult::summary() const
{
    static std::string const empty;
    auto const* a = find("summary.txt");
    return a ? a->content : empty;
}

int exit_code(ErrorKind kind)
{
    return static_cast<int>(kind);
}

std::string exit_code_table()
{
    std::ostringstream os;
    os << "Exit codes:\n"
       << "   0  every stage check passed\n"
       << "   1  unexpected internal error\n";
    for (auto k : kAllKinds)
    {
        char buf[16];
        std::snprintf(buf, sizeof buf, "  %2d  ", exit_code(k));
        os << buf << to_string(k);
        if (k == ErrorKind::stage_failure)
            os << " (a stage check failed)";
        os << '\n';
    }
    return os.str();
}

RunResult run_experiment(Scenario const& scenario)
{
    Run run{scenario, {}, {}, {}};
    run.line("experiment", to_string(scenario.experiment));
    run.line("scenario hash", scenario_hash(scenario));
    run.line("seed", std::to_string(scenario.seed));
    run.line("tool version", kToolVersion);

    RunResult result;
    try
    {
        dispatch(run);
        bool ok = true;
        for (auto const& st : run.stages)
            ok = ok && st.passed;
        result.exit_code = ok ? 0 : exit_code(ErrorKind::stage_failure);
    }
    catch (Error const& e)
    {
        result.exit_code = exit_code(e.kind());
        result.error = e.what();
        run.line("error", e.what());
    }
    catch (std::exception const& e)
    {
        result.exit_code = 1;
        result.error = e.what();
        run.line("error", e.what());
    }
    run.line("exit code", std::to_string(result.exit_code));

    // summary goes second so the primary CSV stays first
    auto it = run.artifacts.begin();
    if (it != run.artifacts.end() && it->name.ends_with(".csv"))
        ++it;
    run.artifacts.insert(it, Artifact{"summary.txt", run.summary.str()});
    result.artifacts = std::move(run.artifacts);
    result.stages = std::move(run.stages);
    return result;
}

int run_scenario(Scenario const& scenario,
                 std::optional<std::filesystem::path> const& out_dir,
                 OutputFormat format,
                 std::size_t threads)
{
    if (threads > 0)
        set_default_threads(threads);
    auto start = std::chrono::steady_clock::now();
    auto result = run_experiment(scenario);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (out_dir)
    {
        std::filesystem::create_directories(*out_dir);
        RunManifest m;
        m.experiment = to_string(scenario.experiment);
        m.scenario_hash = scenario_hash(scenario);
        m.seed = scenario.seed;
        m.threads = default_threads();
        m.wall_seconds = wall;
        m.stages = result.stages;
        m.exit_code = result.exit_code;
        m.error = result.error;
        for (auto const& a : result.artifacts)
        {
            write_atomic(*out_dir / a.name, a.content);
            m.artifacts.push_back(a.name);
        }
        write_atomic(*out_dir / "manifest.json", m.to_json().dump(2) + "\n");
    }

    if (format == OutputFormat::summary || result.csv().empty())
        std::cout << result.summary();
    else
        std::cout << result.csv();
    if (!result.error.empty())
        std::cerr << "hqclab: " << result.error << '\n';
    return result.exit_code;
}

}  // namespace hqclab::cli
