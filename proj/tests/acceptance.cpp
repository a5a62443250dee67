// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <Eigen/LU>
#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hqclab/cli/csv.hpp"
#include "hqclab/cli/runner.hpp"
#include "hqclab/cli/scenario.hpp"
#include "hqclab/core/error.hpp"
#include "hqclab/core/fit.hpp"
#include "hqclab/core/parallel.hpp"
#include "hqclab/core/rng.hpp"
#include "hqclab/geometry/curve.hpp"
#include "hqclab/geometry/patch.hpp"
#include "hqclab/harmonic/field.hpp"
#include "hqclab/harmonic/measure.hpp"
#include "hqclab/hqc/distortion.hpp"
#include "hqclab/hqc/map.hpp"
#include "hqclab/hqc/rotated.hpp"
#include "hqclab/regularity/certificate.hpp"
#include "hqclab/regularity/improvement.hpp"
#include "hqclab/regularity/iteration.hpp"
#include "hqclab/regularity/lemmas.hpp"
#include "hqclab/regularity/pipeline.hpp"

using namespace hqclab;
using geometry::BoundaryPatch;
using geometry::PlanarDomain;
using harmonic::Backend;

namespace
{
struct Outcome
{
    bool passed = true;
    std::string detail;

    void require(bool ok, std::string const& what)
    {
        if (!detail.empty())
            detail += "; ";
        detail += what;
        if (!ok)
        {
            passed = false;
            detail += " [x]";
        }
    }
};

std::string fmt(char const* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(char const* f, double a, double b)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::shared_ptr<BoundaryPatch const> half_plane_patch()
{
    return std::make_shared<BoundaryPatch const>(
        geometry::build_patch(PlanarDomain::half_plane(), Vec2::Zero(), 1.0));
}

regularity::BasepointHolderCert power_cert(std::shared_ptr<BoundaryPatch const> patch, double mu)
{
    regularity::BasepointHolderCert c;
    c.patch = std::move(patch);
    c.exponent = mu;
    c.constant = 1;  // |x|^mu on the line
    c.sup_norm = 1;
    return c;
}

harmonic::SolverParams walks(std::size_t n, std::uint64_t seed)
{
    harmonic::SolverParams p;
    p.n_walks = n;
    p.seed = seed;
    return p;
}

std::shared_ptr<hqc::HarmonicMap const> linear_map(Mat2 const& a, PlanarDomain target,
                                                   std::string name)
{
    auto disk = std::make_shared<PlanarDomain const>(PlanarDomain::disk());
    return std::make_shared<hqc::HarmonicMap const>(
        hqc::affine_map(disk, a, Vec2::Zero(), std::move(target), std::move(name)));
}

PlanarDomain ellipse()
{
    return PlanarDomain::bounded(geometry::BoundaryCurve::ellipse(2, 1));
}

//---------------------------------------------------------------------------//
Outcome gradient_decay()
{
    Outcome o;
    auto patch = half_plane_patch();
    auto t = geometric_grid(1e-3, 1e-1, 32);
    for (double mu : {0.3, 0.5, 0.7, 0.9})
    {
        auto field = harmonic::polar_power_field(patch, mu);
        auto g = regularity::gradient_decay_check(power_cert(patch, mu), *field, t);
        double e = g.fit.exponent;
        o.require(g.passed && std::abs(e - (mu - 1)) <= 0.02
                      && std::abs(g.fit.constant / mu - 1) <= 0.05,
                  fmt("mu %.1f: ", mu) + fmt("exponent %.4f, prefactor %.4f", e, g.fit.constant));
    }
    return o;
}

Outcome uniform_gradient()
{
    Outcome o;
    auto patch = half_plane_patch();
    auto t = geometric_grid(1e-3, 1e-1, 32);
    for (double mu : {1.1, 1.2, 1.5})
    {
        auto field = harmonic::polar_power_field(patch, mu);
        auto g = regularity::uniform_gradient_check(power_cert(patch, mu), *field, t);
        o.require(g.passed && g.fit.exponent >= -0.02 && g.max_norm <= mu * (1 + 1e-6),
                  fmt("mu %.1f: ", mu)
                      + fmt("exponent %.4f, max |grad u| %.6f", g.fit.exponent, g.max_norm));
    }
    return o;
}

Outcome tent()
{
    Outcome o;
    auto patch = half_plane_patch();
    auto field = harmonic::polar_power_field(patch, 0.5);
    auto t = geometric_grid(1e-3, 1e-1, 24);
    auto r = regularity::tent_check(power_cert(patch, 0.5), *field, t);

    // sup of r^1/2 cos(theta/2) over B((0, 1), 1/2); by scaling sup/t^1/2 is this constant
    double oracle = 0;
    for (int i = 0; i <= 400; ++i)
    {
        for (int j = 0; j < 720; ++j)
        {
            double rho = 0.5 * i / 400, phi = two_pi * j / 720;
            Vec2 y(rho * std::cos(phi), 1 + rho * std::sin(phi));
            oracle = std::max(oracle,
                              std::sqrt(y.norm()) * std::cos(0.5 * std::atan2(y.y(), y.x())));
        }
    }
    o.require(r.passed && std::abs(r.fit.exponent - 0.5) <= 0.02,
              fmt("exponent %.4f", r.fit.exponent));
    o.require(r.max_ratio <= 2 && r.max_ratio <= oracle * (1 + 1e-9)
                  && r.max_ratio >= 0.99 * oracle,
              fmt("max sup/t^0.5 %.5f, oracle %.5f", r.max_ratio, oracle));
    return o;
}

cli::Scenario leak_scenario(Backend backend)
{
    nlohmann::json j = {{"schema_version", 1},
                        {"experiment", "leak-profile"},
                        {"seed", 2024},
                        {"domain", {{"kind", "half_disk"}}}};
    if (backend == Backend::grid)
    {
        j["solver"] = {{"backend", "grid"}, {"grid_h", 1.0 / 512}};
        j["grid"] = {{"min", 0.01}, {"max", 0.2}, {"points", 12}};
    }
    else
    {
        j["solver"] = {{"backend", "walk_on_spheres"}, {"walks", 100000}};
        j["grid"] = {{"min", 0.01}, {"max", 0.2}, {"points", 5}};
    }
    return cli::parse_scenario(j);
}

Outcome sigma_leak()
{
    Outcome o;
    auto grid_run = cli::run_experiment(leak_scenario(Backend::grid));
    auto wos_run = cli::run_experiment(leak_scenario(Backend::walk_on_spheres));
    if (grid_run.exit_code || wos_run.exit_code)
    {
        o.require(false, "runs failed: " + grid_run.error + wos_run.error);
        return o;
    }
    auto g = cli::parse_csv(grid_run.csv());
    auto gt = g.numeric("t");
    auto gv = g.numeric("value");
    auto fit = fit_power_law(gt, gv);
    o.require(std::abs(fit.exponent - 1) <= 0.1, fmt("grid h=2^-9 exponent %.4f", fit.exponent));

    // walks against the grid solution at the five walk heights
    auto patch = geometry::half_disk_patch();
    auto w = cli::parse_csv(wos_run.csv());
    auto wt = w.numeric("t");
    auto wv = w.numeric("value");
    auto we = w.numeric("std_error");
    harmonic::SolverParams gp;
    gp.grid_h = 1.0 / 512;
    auto on_walk_grid = harmonic::sigma_leak_profile(patch, wt, gp, Backend::grid);
    double worst = 0;
    for (std::size_t i = 0; i < wt.size(); ++i)
        worst = std::max(worst, std::abs(wv[i] - on_walk_grid.points[i].measure.value) / we[i]);
    o.require(worst <= 3, fmt("walks (1e5) vs grid: max %.2f sigma", worst));
    return o;
}

Outcome tail_decay()
{
    Outcome o;
    // closed form on the half-plane: the scaled tail tends to 2/pi
    {
        auto patch = geometry::half_disk_patch(1e9);
        std::vector<double> s = {1e3, 1e4};
        auto prof = harmonic::gamma_tail_profile(patch, Vec2(0, 1), s, {}, Backend::closed_form);
        double last = prof.points.back().measure.value * s.back();
        o.require(std::abs(last / (2 / pi) - 1) <= 1e-3,
                  fmt("closed form F s/delta at s/delta=1e4: %.6f", last));
    }
    // walks; delta << r0 so the finite patch changes F by about 2 s / r0 < 0.2%
    {
        auto patch = geometry::half_disk_patch();
        double delta = 1e-5;
        auto p = walks(2000000, 5);
        p.eps_shell = 1e-4 * delta;
        auto s = geometric_grid(10 * delta, 100 * delta, 5);
        auto prof = harmonic::gamma_tail_profile(patch, Vec2(0, delta), s, p);
        double worst = 0;
        for (auto const& pt : prof.points)
            worst = std::max(worst, std::abs(pt.measure.value * pt.x / delta / (2 / pi) - 1));
        o.require(worst <= 0.05 && prof.monotone,
                  fmt("walks (2e6) s/delta in [10, 100]: max relative deviation %.4f", worst));
    }
    return o;
}

Outcome layer_cake()
{
    Outcome o;
    auto disk = PlanarDomain::disk();
    std::vector<std::shared_ptr<BoundaryPatch const>> patches = {
        std::make_shared<BoundaryPatch const>(geometry::half_disk_patch()),
        std::make_shared<BoundaryPatch const>(geometry::build_patch(disk, {1, 0}, 0.5)),
        std::make_shared<BoundaryPatch const>(geometry::build_patch(ellipse(), {2, 0}, 0.5)),
    };
    std::size_t agree = 0, total = 0;
    double worst = 0;
    std::uint64_t seed = 100;
    for (auto const& patch : patches)
    {
        double r0 = patch->radius();
        for (double depth : {0.05, 0.15})
        {
            Vec2 y = patch->normal_point(depth * r0);
            for (double mu : {0.5, 1.2})
            {
                auto lc = harmonic::layer_cake_moment(*patch, y, mu, walks(20000, ++seed));
                ++total;
                agree += lc.agree ? 1 : 0;
                worst = std::max(worst, std::abs(lc.direct.value - lc.quadrature.value) / lc.sigma);
            }
        }
    }
    o.require(agree == total, std::to_string(agree) + "/" + std::to_string(total)
                                  + fmt(" within 3 sigma, worst %.2f sigma", worst));
    return o;
}

Outcome iteration()
{
    Outcome o;
    auto a = regularity::exponent_iteration(0.2, 0.3);
    o.require(a.m0 == 7 && a.beta.back() == 1.07495424,
              "(0.2, 0.3): m0 " + std::to_string(a.m0) + fmt(", beta_7 %.17g", a.beta.back()));
    auto b = regularity::exponent_iteration(0.5, 0.9);
    o.require(b.m0 == 1, "(0.5, 0.9): m0 " + std::to_string(b.m0));
    auto c = regularity::exponent_iteration(0.25, 0.8);
    o.require(c.endpoint_shift > 0 && std::abs(c.beta[1] - 1) >= 1e-6,
              fmt("(0.25, 0.8): shift %.3g, beta_1 %.12f", c.endpoint_shift, c.beta[1]));
    return o;
}

Outcome distortion_algebra()
{
    Outcome o;
    CounterRng rng(8, 0);
    std::size_t accepted = 0, upper = 0, rows = 0, disagree = 0;
    double worst_excess = 0;
    while (accepted < 100000)
    {
        Mat2 a;
        a << 2 * rng.uniform() - 1, 2 * rng.uniform() - 1, 2 * rng.uniform() - 1,
            2 * rng.uniform() - 1;
        double j = a.determinant();
        if (j <= 1e-8)
            continue;
        ++accepted;
        // independent singular values
        Eigen::JacobiSVD<Mat2> svd(a);
        double smax = svd.singularValues()(0), smin = svd.singularValues()(1);
        double k = smax * smax / j;
        double h = std::pow(k, 1.0 / (2 - 1));
        // the upper bound is an equality in the plane; allow the rounding of
        // det (cancellation) and of the small singular value
        double eps = std::numeric_limits<double>::epsilon();
        double round = 16 * eps
                       * ((std::abs(a(0, 0) * a(1, 1)) + std::abs(a(0, 1) * a(1, 0))) / j
                          + smax / smin);
        double excess = smax / (h * smin) - 1;
        worst_excess = std::max(worst_excess, excess / (1e-12 + round));
        if (excess > 1e-12 + round)
            ++upper;
        if (smin > a.row(0).norm() * (1 + 1e-12) || smin > a.row(1).norm() * (1 + 1e-12))
            ++rows;
        auto report = hqc::distortion_check(hqc::make_sample(Vec2::Zero(), a), k);
        if (!report.passed() || !report.hypothesis)
            ++disagree;
    }
    o.require(upper == 0, std::to_string(upper) + " upper-bound violations"
                              + fmt(" (worst excess %.2f of the rounding allowance)", worst_excess));
    o.require(rows == 0, std::to_string(rows) + " row violations");
    o.require(disagree == 0, std::to_string(disagree) + " library disagreements");
    return o;
}

Outcome improvement()
{
    Outcome o;
    Mat2 a;
    a << 2, 0, 0, 1;
    auto f = linear_map(a, ellipse(), "(2x, y)");
    auto disk = PlanarDomain::disk();
    Vec2 xi(1, 0), f_xi(2, 0);
    auto samples = regularity::sample_trace(
        disk, xi, [&](Vec2 const& eta) { return ((*f)(eta) - f_xi).norm(); }, {});
    auto patch = std::make_shared<BoundaryPatch const>(geometry::build_patch(disk, xi, 0.5));
    auto trace = regularity::trace_holder_fit(samples, patch, 2.0, 0.0, 0.9);
    auto rotated = hqc::rotate_to_chart(f, xi, std::nullopt, 512, 0.5);
    regularity::NormalTraceOptions options;
    options.tolerance = 1e-6;
    auto cert = regularity::normal_trace_improvement(rotated, trace, options);
    o.require(cert.samples > 0 && cert.violations == 0,
              std::to_string(cert.violations) + " violations in " + std::to_string(cert.samples)
                  + fmt(" samples, beta1 %.4f", cert.beta1));
    // F_n = 2 - 2 cos(phi) in the chart at (2, 0)
    double worst = 0;
    for (auto const& s : rotated.samples())
    {
        double phi = std::atan2(s.eta.y(), s.eta.x());
        worst = std::max(worst, std::abs(s.image.y() - (2 - 2 * std::cos(phi))));
    }
    o.require(worst < 1e-12, fmt("normal trace vs 2 - 2 cos(phi): %.2e", worst));
    return o;
}

Outcome lipschitz()
{
    Outcome o;
    auto points = regularity::circle_points(8);
    regularity::PipelineOptions opt;
    auto id = regularity::lipschitz_pipeline(linear_map(Mat2::Identity(), PlanarDomain::disk(),
                                                        "identity"),
                                             points, opt);
    o.require(std::abs(id.lipschitz - 1) <= 0.02 && id.cross_valid,
              fmt("identity L %.5f", id.lipschitz));
    Mat2 a;
    a << 2, 0, 0, 1;
    auto st = regularity::lipschitz_pipeline(linear_map(a, ellipse(), "(2x, y)"), points, opt);
    o.require(std::abs(st.lipschitz / 2 - 1) <= 0.02 && st.cross_valid,
              fmt("(2x, y) L %.5f", st.lipschitz));

    hqc::BoundaryMapSpec spec;
    spec.kind = hqc::BoundaryMapSpec::Kind::twist;
    spec.epsilon = 0.3;
    auto tw = std::make_shared<hqc::HarmonicMap const>(
        hqc::poisson_extension(spec, PlanarDomain::disk()));
    auto r = regularity::lipschitz_pipeline(tw, points, opt);
    o.require(std::isfinite(r.lipschitz) && r.direct_quotient <= 1.05 * r.lipschitz,
              fmt("twist(0.3) L %.5f, 1e4-pair quotient %.5f", r.lipschitz, r.direct_quotient));
    return o;
}

Outcome reproducibility()
{
    Outcome o;
    auto saved = default_threads();
    for (auto backend : {Backend::grid, Backend::walk_on_spheres})
    {
        auto s = leak_scenario(backend);
        set_default_threads(1);
        auto one = cli::run_experiment(s);
        set_default_threads(8);
        auto eight = cli::run_experiment(s);
        o.require(one.exit_code == 0 && !one.csv().empty() && one.csv() == eight.csv(),
                  harmonic::to_string(backend) + " CSV identical on 1 and 8 workers");
    }
    set_default_threads(saved);
    return o;
}
}  // namespace

int main()
{
    struct Criterion
    {
        int id;
        char const* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria = {
        {1, "closed-form gradient decay", gradient_decay},
        {2, "uniform gradient bound for mu > 1", uniform_gradient},
        {3, "tent estimate", tent},
        {4, "Sigma leak", sigma_leak},
        {5, "Gamma tail decay", tail_decay},
        {6, "layer-cake identity", layer_cake},
        {7, "exponent iteration", iteration},
        {8, "distortion algebra", distortion_algebra},
        {9, "exponent improvement", improvement},
        {10, "Lipschitz pipeline", lipschitz},
        {11, "reproducibility", reproducibility},
    };
    int failures = 0;
    for (auto const& c : criteria)
    {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = c.run();
        }
        catch (std::exception const& e)
        {
            o.passed = false;
            o.detail = std::string("error: ") + e.what();
        }
        double secs
            = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %s: %s (%.1f s) %s\n", c.id, o.passed ? "PASS" : "FAIL", c.name,
                    secs, o.detail.c_str());
        std::fflush(stdout);
        failures += o.passed ? 0 : 1;
    }
    return failures ? 1 : 0;
}
