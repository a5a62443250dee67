#include <doctest.h>

#include <cmath>
#include <memory>

#include "hqclab/core/error.hpp"
#include "hqclab/core/rng.hpp"
#include "hqclab/geometry/domain.hpp"
#include "hqclab/geometry/patch.hpp"
#include "hqclab/harmonic/field.hpp"
#include "hqclab/harmonic/grid.hpp"
#include "hqclab/harmonic/measure.hpp"
#include "hqclab/harmonic/poisson.hpp"
#include "hqclab/harmonic/walk.hpp"

using namespace hqclab;
using namespace hqclab::harmonic;
using geometry::BoundaryHit;
using geometry::BoundaryPart;
using geometry::BoundaryPatch;
using geometry::PlanarDomain;

namespace
{
// Axis-aligned open square, only used to test the grid stencil.
class Square final : public geometry::Region
{
  public:
    explicit Square(double half) : half_(half) {}
    bool contains(Vec2 const& x) const override
    {
        return std::abs(x.x()) < half_ && std::abs(x.y()) < half_;
    }
    double distance(Vec2 const& x) const override
    {
        return std::min(half_ - std::abs(x.x()), half_ - std::abs(x.y()));
    }
    geometry::BoundaryHit project(Vec2 const& x) const override
    {
        Vec2 p = x.cwiseMax(-half_).cwiseMin(half_);
        if (contains(p))
        {
            if (half_ - std::abs(p.x()) < half_ - std::abs(p.y()))
                p.x() = std::copysign(half_, p.x());
            else
                p.y() = std::copysign(half_, p.y());
        }
        return {p, BoundaryPart::boundary};
    }
    geometry::BoundingBox bounds() const override
    {
        return {Vec2(-half_, -half_), Vec2(half_, half_)};
    }
    std::string describe() const override { return "square"; }

  private:
    double half_;
};

std::shared_ptr<PlanarDomain const> unit_disk()
{
    return std::make_shared<PlanarDomain const>(PlanarDomain::disk());
}

double cos_theta(BoundaryHit const& h)
{
    return h.point.x() / h.point.norm();
}

// Harmonic measure of Gamma \ B(0, s) in the unit half-disk from (0, t):
// ((1 + z) / (1 - z))^2 maps the half-disk onto the upper half-plane, sends
// the pole to exp(4 i atan t) and Gamma \ B(0,s) to (0, 1/a^2] U [a^2, inf)
// with a = (1 + s) / (1 - s).
double half_disk_tail(double s, double t)
{
    if (s >= 1)
        return 0;
    double th = 4 * std::atan(t);
    double u = std::cos(th), v = std::sin(th);
    auto cdf = [&](double q) { return std::atan((q - u) / v) / pi; };
    double a = (1 + s) / (1 - s);
    a *= a;
    return 0.5 - cdf(a) + cdf(1 / a) - cdf(0);
}

double half_disk_sigma(double t)
{
    return 4 / pi * std::atan(t);
}

SolverParams walks(std::size_t n, std::uint64_t seed = 7)
{
    SolverParams p;
    p.n_walks = n;
    p.seed = seed;
    return p;
}
}  // namespace

TEST_CASE("walk-on-spheres evaluates the disk extension of cos")
{
    auto region = unit_disk();
    WalkOnSpheresField field(region, cos_theta, walks(20000));
    auto c = field.value(Vec2(0, 0));
    CHECK(std::abs(c.value) < 3 * c.std_error + 1e-3);
    auto h = field.value(Vec2(0.5, 0));
    CHECK(h.std_error > 0);
    CHECK(std::abs(h.value - 0.5) < 3 * h.std_error + 1e-3);
}

TEST_CASE("walk-on-spheres on the half-disk patch reproduces r^mu cos(mu theta)")
{
    auto patch = std::make_shared<BoundaryPatch const>(geometry::half_disk_patch());
    auto exact = polar_power_field(patch, 0.5);
    WalkOnSpheresField field(
        patch, [&](BoundaryHit const& h) { return (*exact)(h.point); }, walks(20000));
    auto v = field.value(Vec2(0, 0.25));
    CHECK((*exact)(Vec2(0, 0.25)) == doctest::Approx(0.35355339).epsilon(1e-8));
    CHECK(std::abs(v.value - 0.35355339) < 3 * v.std_error + 1e-3);
}

TEST_CASE("walk batches do not depend on the worker count")
{
    auto region = PlanarDomain::bounded(geometry::BoundaryCurve::fourier({0, 0, 0.1}));
    auto p = walks(3000, 42);
    p.threads = 1;
    auto a = run_walks(region, Vec2(0.2, -0.1), p);
    p.threads = 4;
    auto b = run_walks(region, Vec2(0.2, -0.1), p);
    REQUIRE(a.exits.size() == b.exits.size());
    bool same = true;
    for (std::size_t i = 0; i < a.exits.size(); ++i)
        same = same && a.exits[i].hit.point == b.exits[i].hit.point
               && a.exits[i].steps == b.exits[i].steps;
    CHECK(same);
    p.seed = 43;
    auto c = run_walks(region, Vec2(0.2, -0.1), p);
    CHECK(c.exits[0].hit.point != a.exits[0].hit.point);
}

TEST_CASE("capped walks raise MaxStepsExceeded")
{
    auto p = walks(200);
    p.max_steps = 1;
    try
    {
        run_walks(*unit_disk(), Vec2(0, 0), p);
        FAIL("expected an error");
    }
    catch (Error const& e)
    {
        CHECK(e.kind() == ErrorKind::max_steps_exceeded);
    }
    p.eps_shell = 0;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("mean value and maximum principle on the walk field")
{
    auto region = unit_disk();
    auto g = [](BoundaryHit const& h) { return h.point.x() * h.point.x() - h.point.y() * h.point.y(); };
    WalkOnSpheresField field(region, g, walks(4000, 3));
    CounterRng rng(11, 0);
    for (int k = 0; k < 4; ++k)
    {
        Vec2 x(0.6 * rng.uniform() - 0.3, 0.6 * rng.uniform() - 0.3);
        double r = 0.5 * region->distance(x);
        auto center = field.value(x);
        double avg = 0, var = 0;
        for (int j = 0; j < 64; ++j)
        {
            double a = two_pi * j / 64;
            auto v = field.value(x + r * Vec2(std::cos(a), std::sin(a)));
            avg += v.value / 64;
            var += v.std_error * v.std_error / (64.0 * 64.0);
            CHECK(v.value >= -1 - 1e-9);
            CHECK(v.value <= 1 + 1e-9);
        }
        // samples share streams, so the bound uses the un-averaged error
        CHECK(std::abs(avg - center.value) < 3 * (center.std_error + std::sqrt(var * 64)));
    }
}

TEST_CASE("halving eps_shell stays within the reported error")
{
    auto region = unit_disk();
    auto p = walks(20000, 5);
    WalkOnSpheresField coarse(region, cos_theta, p);
    p.eps_shell /= 2;
    WalkOnSpheresField fine(region, cos_theta, p);
    auto a = coarse.value(Vec2(0.5, 0));
    auto b = fine.value(Vec2(0.5, 0));
    CHECK(std::abs(a.value - b.value) < a.std_error);
}

TEST_CASE("harmonic measure examples")
{
    SUBCASE("disk arc of angle 2 pi / 3")
    {
        auto m = harmonic_measure(*unit_disk(), Vec2(0, 0),
                                  BoundaryTarget::arc(Vec2(0, 0), 0.3, two_pi / 3), walks(20000));
        CHECK(std::abs(m.value - 1.0 / 3) < 3 * m.std_error);
        CHECK(m.n_walks == 20000);
    }
    SUBCASE("upper half-plane outside |x| > s, closed form")
    {
        auto hp = PlanarDomain::half_plane();
        auto m = harmonic_measure(hp, Vec2(0, 0.1), BoundaryTarget::outside_ball(Vec2(0, 0), 1.0),
                                  {}, Backend::closed_form);
        CHECK(m.value == doctest::Approx(1 - 2 / pi * std::atan(10.0)).epsilon(1e-12));
        CHECK(m.value == doctest::Approx(0.063451).epsilon(1e-5));
        CHECK_THROWS_AS(harmonic_measure(hp, Vec2(0, 0.1), BoundaryTarget::whole(), walks(10)),
                        Error);
    }
    SUBCASE("half-disk Sigma from (0, 0.05): walks, grid and closed form")
    {
        auto patch = geometry::half_disk_patch();
        auto sigma = BoundaryTarget::of_part(BoundaryPart::sigma);
        auto w = harmonic_measure(patch, Vec2(0, 0.05), sigma, walks(40000));
        auto p = walks(1);
        p.grid_h = 1.0 / 256;
        auto g = harmonic_measure(patch, Vec2(0, 0.05), sigma, p, Backend::grid);
        double exact = half_disk_sigma(0.05);
        CHECK(std::abs(g.value - exact) < 1e-4);
        CHECK(std::abs(w.value - g.value) < 3 * w.std_error);
        CHECK(w.value <= 1.3 * 0.05);
    }
}

TEST_CASE("harmonic measure of eight arcs sums to one")
{
    auto region = PlanarDomain::bounded(geometry::BoundaryCurve::fourier({0, 0, 0.1}));
    std::vector<BoundaryTarget> arcs;
    for (int k = 0; k < 8; ++k)
        arcs.push_back(BoundaryTarget::arc(Vec2(0, 0), -pi + k * two_pi / 8, two_pi / 8));
    CounterRng rng(9, 1);
    for (int trial = 0; trial < 10; ++trial)
    {
        Vec2 y(rng.uniform() - 0.5, rng.uniform() - 0.5);
        auto ms = harmonic_measures(region, y, arcs, walks(2000, 100 + trial));
        double sum = 0, var = 0;
        for (auto const& m : ms)
        {
            sum += m.value;
            var += m.std_error * m.std_error;
            CHECK(m.value - 3 * m.std_error >= -0.01);
            CHECK(m.value + 3 * m.std_error <= 1.01);
        }
        CHECK(std::abs(sum - 1) <= 3 * std::sqrt(var) + 1e-12);
    }
}

TEST_CASE("sigma leak profile is linear in t")
{
    auto patch = geometry::half_disk_patch();
    auto t = geometric_grid(0.01, 0.2, 8);
    auto p = walks(1);
    p.grid_h = 1.0 / 128;
    auto grid = sigma_leak_profile(patch, t, p, Backend::grid);
    CHECK(grid.increasing);
    CHECK(grid.passed());
    CHECK(std::abs(grid.fit.exponent - 1) < 0.1);
    CHECK(grid.slope == doctest::Approx(4 / pi).epsilon(0.02));
    for (auto const& pt : grid.points)
        CHECK(std::abs(pt.measure.value - half_disk_sigma(pt.x)) < 1e-3 * pt.x);

    auto mc = sigma_leak_profile(patch, t, walks(20000), Backend::walk_on_spheres);
    CHECK(mc.passed());
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(std::abs(mc.points[i].measure.value - grid.points[i].measure.value)
              < 3.5 * mc.points[i].measure.std_error + 1e-4);

    std::vector<double> bad = {0.01, 0.5};
    CHECK_THROWS_AS(sigma_leak_profile(patch, bad, p, Backend::grid), Error);

    // a small patch on the disk: Sigma is most of the boundary, C grows
    auto disk = PlanarDomain::disk();
    auto small = geometry::build_patch(disk, Vec2(1, 0), 0.1);
    auto ts = geometric_grid(0.001, 0.02, 8);
    auto sp = walks(1);
    sp.grid_h = 0.1 / 128;
    auto prof = sigma_leak_profile(small, ts, sp, Backend::grid);
    CHECK(std::abs(prof.fit.exponent - 1) < 0.1);
    CHECK(prof.slope > 5 * grid.slope);
}

TEST_CASE("gamma tail profile")
{
    SUBCASE("half-plane closed form approaches 2/pi")
    {
        auto patch = geometry::half_disk_patch(1e6);
        double t = 1.0;
        std::vector<double> s = {10, 100, 1000, 10000};
        auto prof = gamma_tail_profile(patch, Vec2(0, t), s, {}, Backend::closed_form);
        CHECK(prof.monotone);
        for (auto const& pt : prof.points)
            CHECK(pt.measure.value
                  == doctest::Approx(1 - 2 / pi * std::atan(pt.x / t) - (1 - 2 / pi * std::atan(1e6)))
                         .epsilon(1e-9));
        CHECK(prof.points[2].measure.value * 1e3 == doctest::Approx(2 / pi).epsilon(2e-3));
    }
    SUBCASE("half-disk walks against the conformal-map oracle")
    {
        auto patch = geometry::half_disk_patch();
        double t = 0.02;
        std::vector<double> s = {0.05, 0.1, 0.2, 0.4, 0.8, 1.0};
        auto prof = gamma_tail_profile(patch, Vec2(0, t), s, walks(40000));
        CHECK(prof.monotone);
        CHECK(prof.delta == doctest::Approx(t));
        CHECK(prof.points.back().measure.value == 0);
        for (auto const& pt : prof.points)
            CHECK(std::abs(pt.measure.value - half_disk_tail(pt.x, t))
                  < 3.5 * pt.measure.std_error + 2e-4);
        auto doubled = gamma_tail_profile(patch, Vec2(0, t), s, walks(80000, 8));
        CHECK(std::abs(doubled.constant - prof.constant) < 0.1 * prof.constant);
        std::vector<double> inside = {0.01};
        CHECK_THROWS_AS(gamma_tail_profile(patch, Vec2(0, t), inside, walks(10)), Error);
    }
}

TEST_CASE("layer cake moment")
{
    SUBCASE("closed form mu = 1 on the half-plane")
    {
        double t = 0.05, smax = 1.0;
        auto patch = geometry::half_disk_patch(smax);
        auto lc = layer_cake_moment(patch, Vec2(0, t), 1.0, {}, Backend::closed_form);
        double exact = t / pi * std::log(1 + smax * smax / (t * t));
        CHECK(std::abs(lc.quadrature.value - exact) < 0.02 * exact);
        CHECK(std::abs(lc.direct.value - exact) < 1e-8 * exact);
        CHECK(lc.agree);
    }
    SUBCASE("small mu approaches the Gamma measure")
    {
        auto patch = geometry::half_disk_patch();
        auto lc = layer_cake_moment(patch, Vec2(0, 0.05), 1e-4, walks(20000));
        CHECK(std::abs(lc.direct.value - lc.gamma_measure.value) < 2e-3);
        CHECK(lc.gamma_measure.value
              == doctest::Approx(1 - half_disk_sigma(0.05)).epsilon(0.01));
    }
    SUBCASE("direct and tail quadrature agree on walks")
    {
        auto patch = geometry::half_disk_patch();
        for (double mu : {0.5, 1.2})
        {
            auto lc = layer_cake_moment(patch, Vec2(0, 0.05), mu, walks(20000));
            CHECK(lc.agree);
            CHECK(lc.sigma > 0);
        }
        auto lc = layer_cake_moment(patch, Vec2(0, 0.05), 0.5, walks(20000));
        CHECK(lc.direct.value <= 3 * std::sqrt(0.05));
    }
    SUBCASE("under-resolved quadrature grid")
    {
        auto patch = geometry::half_disk_patch();
        LayerCakeOptions opt;
        opt.s_points = 20;
        CHECK_THROWS_AS(layer_cake_moment(patch, Vec2(0, 0.05), 0.5, walks(10),
                                          Backend::walk_on_spheres, opt),
                        Error);
        CHECK_THROWS_AS(layer_cake_moment(patch, Vec2(0, 0.05), 0.0, walks(10)), Error);
    }
}

TEST_CASE("gradient estimates")
{
    SUBCASE("linear field on the disk")
    {
        auto f = linear_field(unit_disk(), Vec2(1, 0));
        auto g = gradient_estimate(*f, Vec2(0.3, -0.2));
        CHECK(g.exact);
        CHECK((g.gradient - Vec2(1, 0)).norm() < 1e-14);
        CHECK((g.finite_difference - Vec2(1, 0)).norm() < 1e-10);
    }
    SUBCASE("r^mu cos(mu theta) on the half-plane")
    {
        auto f = polar_power_field(std::make_shared<PlanarDomain const>(PlanarDomain::half_plane()),
                                   0.5);
        auto g = gradient_estimate(*f, Vec2(0, 0.04));
        CHECK(g.gradient.norm() == doctest::Approx(2.5).epsilon(1e-12));
        // central difference error is O(h^2) relative to the curvature scale t
        CHECK((g.finite_difference - g.gradient).norm() < 0.01 * g.gradient.norm());
        auto g2 = gradient_estimate(*f, Vec2(0, 0.04), 0.0025);
        CHECK((g2.finite_difference - g2.gradient).norm()
              < 0.3 * (g.finite_difference - g.gradient).norm());
    }
    SUBCASE("grid backend on the disk")
    {
        auto sol = grid_solve(unit_disk(), cos_theta, 1.0 / 128);
        GridField f(std::move(sol));
        auto g = gradient_estimate(f, Vec2(0.3, 0));
        CHECK(std::abs(g.gradient.x() - 1) < 0.01);
        CHECK(std::abs(g.gradient.y()) < 0.01);
        CHECK_THROWS_AS(gradient_estimate(f, Vec2(0.99, 0)), Error);
    }
    SUBCASE("walk backend uses common random numbers")
    {
        WalkOnSpheresField f(unit_disk(), cos_theta, walks(4000));
        auto g = gradient_estimate(f, Vec2(0.2, 0.1));
        CHECK(std::abs(g.gradient.x() - 1) < 4 * g.std_error.x() + 0.02);
        CHECK(std::abs(g.gradient.y()) < 4 * g.std_error.y() + 0.02);
    }
    SUBCASE("step too large")
    {
        auto f = linear_field(unit_disk(), Vec2(1, 0));
        try
        {
            gradient_estimate(*f, Vec2(0.5, 0), 0.3);
            FAIL("expected an error");
        }
        catch (Error const& e)
        {
            CHECK(e.kind() == ErrorKind::step_too_large);
        }
    }
}

TEST_CASE("grid solver")
{
    SUBCASE("linear data on a square is reproduced exactly")
    {
        auto sq = std::make_shared<Square const>(1.0);
        auto sol = grid_solve(sq, [](BoundaryHit const& h) { return h.point.x(); }, 1.0 / 32);
        double worst = 0;
        for (long j = 0; j < sol.ny; ++j)
            for (long i = 0; i < sol.nx; ++i)
                if (sol.unknown[j * sol.nx + i])
                    worst = std::max(worst, std::abs(sol.at(i, j) - sol.node(i, j).x()));
        CHECK(worst < 1e-12);
        CHECK(sol.residual < 1e-10);
    }
    SUBCASE("disk with cos data: the cut-cell stencil is exact for linear data")
    {
        for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64})
        {
            auto sol = grid_solve(unit_disk(), cos_theta, h);
            double worst = 0;
            for (long j = 0; j < sol.ny; ++j)
                for (long i = 0; i < sol.nx; ++i)
                    if (sol.unknown[j * sol.nx + i])
                        worst = std::max(worst, std::abs(sol.at(i, j) - sol.node(i, j).x()));
            CHECK(worst < 1e-10);
            CHECK(std::abs(sol.interpolate(Vec2(0.3, 0.2)) - 0.3) < 1e-10);
        }
    }
    SUBCASE("half-disk with a square-root singularity converges")
    {
        auto patch = std::make_shared<BoundaryPatch const>(geometry::half_disk_patch());
        auto exact = polar_power_field(patch, 0.5);
        auto data = [&](BoundaryHit const& h) { return (*exact)(h.point); };
        double prev = 1;
        for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128})
        {
            auto sol = grid_solve(patch, data, h);
            double worst = 0;
            for (long j = 0; j < sol.ny; ++j)
                for (long i = 0; i < sol.nx; ++i)
                    if (sol.unknown[j * sol.nx + i])
                        worst = std::max(worst, std::abs(sol.at(i, j) - (*exact)(sol.node(i, j))));
            CHECK(worst < prev);
            prev = worst;
        }
    }
    SUBCASE("too coarse")
    {
        try
        {
            grid_solve(unit_disk(), cos_theta, 0.25);
            FAIL("expected an error");
        }
        catch (Error const& e)
        {
            CHECK(e.kind() == ErrorKind::grid_too_coarse);
        }
    }
}

TEST_CASE("walk and grid backends agree on catalog domains")
{
    using geometry::BoundaryCurve;
    std::vector<std::shared_ptr<geometry::Region const>> regions = {
        unit_disk(),
        std::make_shared<BoundaryPatch const>(geometry::half_disk_patch()),
        std::make_shared<PlanarDomain const>(PlanarDomain::bounded(BoundaryCurve::fourier({0, 0, 0.1}))),
        std::make_shared<PlanarDomain const>(PlanarDomain::bounded(BoundaryCurve::bump(0.5, 0.3, 0.8))),
    };
    auto g = [](BoundaryHit const& h) { return std::sin(2 * h.point.x()) * std::exp(h.point.y()); };
    CounterRng rng(2024, 0);
    for (auto const& region : regions)
    {
        auto fine = grid_solve(region, g, 1.0 / 64);
        auto coarse = grid_solve(region, g, 1.0 / 32);
        WalkOnSpheresField wos(region, g, walks(3000, 17));
        auto box = region->bounds();
        int tested = 0;
        while (tested < 6)
        {
            Vec2 x = box.lo + Vec2(rng.uniform(), rng.uniform()).cwiseProduct(box.hi - box.lo);
            if (!region->contains(x) || region->distance(x) < 0.05)
                continue;
            ++tested;
            auto w = wos.value(x);
            double u = fine.interpolate(x);
            double grid_err = std::abs(u - coarse.interpolate(x));
            CHECK_MESSAGE(std::abs(w.value - u) < 3 * std::hypot(w.std_error, grid_err) + 1e-3,
                          region->describe());
        }
    }
}

TEST_CASE("Poisson disk extension")
{
    SUBCASE("degree-one data")
    {
        auto d = PoissonDisk::from_function([](double t) { return std::cos(t); }, 512);
        CHECK(d.value(Vec2(0.5, 0.2)) == doctest::Approx(0.5).epsilon(1e-13));
        CHECK((d.gradient(Vec2(0.1, -0.7)) - Vec2(1, 0)).norm() < 1e-12);
        CHECK(d.tail_ratio() < 1e-12);
    }
    SUBCASE("mean value at the origin")
    {
        auto g = [](double t) { return std::cos(t + 0.3 * std::sin(t)); };
        auto d = PoissonDisk::from_function(g, 2048);
        double mean = 0;
        for (int k = 0; k < 2048; ++k)
            mean += g(two_pi * k / 2048) / 2048;
        CHECK(d.value(Vec2(0, 0)) == doctest::Approx(mean).epsilon(1e-13));
        auto tr = d.trace(0.7);
        CHECK(std::abs(tr.value - g(0.7)) < 1e-5);
        CHECK(tr.tolerance < 1e-5);
        PoissonDiskField f(d);
        CHECK(f.region().contains(Vec2(0.3, 0.3)));
        CHECK(f.exact_gradient(Vec2(0.1, 0.1)).has_value());
    }
    SUBCASE("harmonic: discrete Laplacian vanishes")
    {
        auto d = PoissonDisk::from_function([](double t) { return std::exp(std::cos(t)); }, 1024);
        Vec2 x(0.3, 0.4);
        double h = 1e-3;
        double lap = d.value(x + Vec2(h, 0)) + d.value(x - Vec2(h, 0)) + d.value(x + Vec2(0, h))
                     + d.value(x - Vec2(0, h)) - 4 * d.value(x);
        CHECK(std::abs(lap / (h * h)) < 1e-4);
    }
}
