#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hqclab/core/error.hpp"
#include "hqclab/core/rng.hpp"
#include "hqclab/geometry/chart.hpp"
#include "hqclab/geometry/config.hpp"
#include "hqclab/geometry/domain.hpp"
#include "hqclab/geometry/patch.hpp"
#include "hqclab/geometry/path.hpp"
#include "hqclab/geometry/quasiconvex.hpp"

using namespace hqclab;
using namespace hqclab::geometry;

namespace
{
// Brute-force distance minimization over a dense parameter grid, refined by a
// second dense grid around the winner.
double brute_force_parameter(BoundaryCurve const& curve, Vec2 const& x)
{
    auto search = [&](double lo, double hi, int n) {
        double best_s = lo, best = 1e300;
        for (int i = 0; i <= n; ++i)
        {
            double const s = lo + (hi - lo) * i / n;
            double const d = (curve.point(s) - x).squaredNorm();
            if (d < best)
            {
                best = d;
                best_s = s;
            }
        }
        return best_s;
    };
    double s = search(0, 1, 200000);
    s = search(s - 1e-5, s + 1e-5, 200000);
    return s;
}

PlanarDomain fourier3()
{
    return PlanarDomain::bounded(BoundaryCurve::fourier({0, 0, 0.1}));
}
}  // namespace

TEST_CASE("nearest point on the unit disk")
{
    auto disk = PlanarDomain::disk();
    auto p = disk.nearest_point({0.5, 0});
    CHECK(p.point.x() == doctest::Approx(1.0));
    CHECK(p.point.y() == doctest::Approx(0.0));
    CHECK(p.delta == doctest::Approx(0.5));

    p = disk.nearest_point({0, 0.999});
    CHECK(p.point.x() == doctest::Approx(0.0));
    CHECK(p.point.y() == doctest::Approx(1.0));
    CHECK(p.delta == doctest::Approx(0.001).epsilon(1e-9));

    CHECK_THROWS_AS(disk.nearest_point({0, 0}), Error);
    try
    {
        disk.nearest_point({0, 0});
    }
    catch (Error const& e)
    {
        CHECK(e.kind() == ErrorKind::non_unique_projection);
    }
}

TEST_CASE("nearest point on a Fourier disk matches dense-grid minimization")
{
    auto domain = fourier3();
    auto const& curve = domain.boundary();
    Vec2 const p0 = curve.point(0);
    Vec2 const x = 0.9 * p0 / p0.norm();
    auto proj = domain.nearest_point(x);
    Vec2 const oracle = curve.point(brute_force_parameter(curve, x));
    CHECK((proj.point - oracle).norm() < 1e-6);
    CHECK(proj.delta == doctest::Approx((x - oracle).norm()).epsilon(1e-9));
    // Orthogonality residual.
    CHECK(std::abs((x - proj.point).dot(curve.unit_tangent(proj.parameter))) < 1e-10);

    // Off-axis points as well.
    CounterRng rng(3, 0);
    for (int i = 0; i < 20; ++i)
    {
        double const s = rng.uniform();
        Vec2 const y = curve.point(s) + 0.3 * rng.uniform() * curve.inward_normal(s);
        auto q = domain.nearest_point(y);
        Vec2 const o = curve.point(brute_force_parameter(curve, y));
        CHECK((q.point - o).norm() < 1e-6);
    }
}

TEST_CASE("points beyond the uniqueness radius are rejected")
{
    auto domain = fourier3();
    CHECK(domain.uniqueness_radius() > 0.2);
    CHECK(domain.uniqueness_radius() < 0.7);
    try
    {
        domain.nearest_point({0.01, 0.02});
        FAIL("expected OutsideTubular");
    }
    catch (Error const& e)
    {
        CHECK(e.kind() == ErrorKind::outside_tubular);
    }
}

TEST_CASE("tubular radius of the disk")
{
    auto disk = PlanarDomain::disk();
    CHECK(disk.uniqueness_radius() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(disk.tubular_radius() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(std::isinf(PlanarDomain::half_plane().tubular_radius()));
}

TEST_CASE("inward normals")
{
    auto disk = PlanarDomain::disk();
    Vec2 n = disk.inward_normal({1, 0});
    CHECK(n.x() == doctest::Approx(-1.0));
    CHECK(n.y() == doctest::Approx(0.0));
    n = disk.inward_normal({0, -1});
    CHECK(n.x() == doctest::Approx(0.0));
    CHECK(n.y() == doctest::Approx(1.0));

    // Implicit function F = rho - 1 - 0.1 cos(3 theta); inward normal is
    // -grad F / |grad F|.
    auto domain = fourier3();
    Vec2 const xi = domain.boundary().point(0);
    double const rho = xi.norm(), th = std::atan2(xi.y(), xi.x());
    Vec2 const grad_rho(std::cos(th), std::sin(th));
    Vec2 const grad_th = Vec2(-std::sin(th), std::cos(th)) / rho;
    Vec2 const grad = grad_rho + 0.3 * std::sin(3 * th) * grad_th;
    Vec2 const oracle = -grad.normalized();
    Vec2 const nu = domain.inward_normal(xi);
    CHECK((nu - oracle).norm() < 1e-8);

    // Off the symmetry axis too.
    Vec2 const xi2 = domain.boundary().point(0.07);
    double const r2 = xi2.norm(), t2 = std::atan2(xi2.y(), xi2.x());
    Vec2 const g2 = Vec2(std::cos(t2), std::sin(t2))
                    + 0.3 * std::sin(3 * t2) * Vec2(-std::sin(t2), std::cos(t2)) / r2;
    CHECK((domain.inward_normal(xi2) + g2.normalized()).norm() < 1e-8);
    CHECK(std::abs(domain.inward_normal(xi2).norm() - 1) < 1e-14);
}

TEST_CASE("graph chart of the unit circle")
{
    auto disk = PlanarDomain::disk();
    auto chart = flatten_chart(disk, {1, 0}, 0.5, 1.0);
    for (double y : {-0.49, -0.2, -1e-3, 0.0, 1e-4, 0.1, 0.3, 0.49})
    {
        CHECK(chart.graph(y) == doctest::Approx(1 - std::sqrt(1 - y * y)).epsilon(1e-12));
        CHECK(chart.slope(y) == doctest::Approx(y / std::sqrt(1 - y * y)).epsilon(1e-10));
    }
    // Phi'(y)/y = 1/sqrt(1-y^2) is the binding quotient; its max on |y| <= 1/2.
    CHECK(chart.constant() == doctest::Approx(1 / std::sqrt(0.75)).epsilon(1e-6));

    // With alpha = 1/2 the Taylor remainder stays below 1 on |y| <= 1/2.
    auto half = flatten_chart(disk, {1, 0}, 0.5, 0.5);
    CHECK(half.constant() <= 1.0);

    CHECK(chart.max_radius() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
    CHECK_THROWS_AS(flatten_chart(disk, {1, 0}, 1.5), Error);

    // Rigid motion sends q to 0 and nu(q) to e2.
    Vec2 const o = chart.to_chart({1, 0});
    CHECK(o.norm() < 1e-15);
    Vec2 const e2 = chart.rotation() * disk.inward_normal({1, 0});
    CHECK(e2.x() == doctest::Approx(0.0));
    CHECK(e2.y() == doctest::Approx(1.0));
}

TEST_CASE("flat boundary chart is trivial")
{
    auto chart = flatten_chart(PlanarDomain::half_plane(), {0.3, 0});
    CHECK(chart.graph(0.2) == 0.0);
    CHECK(chart.slope(-0.2) == 0.0);
    CHECK(chart.constant() == 0.0);
}

TEST_CASE("chart reproduces a perturbed curve")
{
    auto domain = fourier3();
    auto const& curve = domain.boundary();
    Vec2 const q = curve.point(0.25);
    auto chart = flatten_chart(domain, q);
    CHECK(chart.graph(0) == 0.0);
    CHECK(chart.slope(0) == 0.0);
    int checked = 0;
    for (int i = -200; i <= 200; ++i)
    {
        double const s = 0.25 + i * 2.5e-4;
        Vec2 const y = chart.to_chart(curve.point(s));
        if (y.norm() >= chart.radius())
            continue;
        CHECK(std::abs(y.y() - chart.graph(y.x())) < 1e-8);
        CHECK((chart.from_chart(y) - curve.point(s)).norm() < 1e-12);
        ++checked;
    }
    CHECK(checked > 100);

    // Reported constant bounds every sampled quotient.
    for (int i = 1; i <= 400; ++i)
    {
        double const y = chart.radius() * (i / 401.0) * (i % 2 ? 1 : -1);
        double const a = std::abs(y);
        CHECK(std::abs(chart.graph(y)) <= chart.constant() * std::pow(a, 1 + chart.alpha()) * (1 + 1e-9));
        CHECK(std::abs(chart.slope(y)) <= chart.constant() * std::pow(a, chart.alpha()) * (1 + 1e-9));
    }
}

TEST_CASE("chart on a C^{1,alpha} bump keeps the declared exponent")
{
    auto domain = PlanarDomain::bounded(BoundaryCurve::bump(0.5, 0.3, 0.8));
    auto chart = flatten_chart(domain, domain.boundary().point(0));
    CHECK(chart.alpha() == 0.5);
    CHECK(std::isfinite(chart.constant()));
    CHECK(chart.constant() > 0);
}

TEST_CASE("patch construction")
{
    auto hp = build_patch(PlanarDomain::half_plane(), {0, 0}, 1.0, 0.25);
    CHECK(hp.collar_fraction() == 0.25);
    for (auto const& g : hp.gamma_samples())
    {
        CHECK(g.y() == 0.0);
        CHECK(std::abs(g.x()) < 1.0);
    }
    for (auto const& s : hp.sigma_samples())
    {
        CHECK(s.norm() == doctest::Approx(1.0));
        CHECK(s.y() > 0);
    }
    CHECK(hp.separated(0.25));

    auto disk = PlanarDomain::disk();
    auto dp = build_patch(disk, {1, 0}, 0.5, 0.2);
    CHECK(!dp.sigma_samples().empty());
    double min_sigma = 1e9;
    for (auto const& s : dp.sigma_samples())
        min_sigma = std::min(min_sigma, (s - Vec2(1, 0)).norm());
    CHECK(min_sigma > 2 * 0.2 * 0.5);

    try
    {
        build_patch(disk, {1, 0}, 0.5, 0.6);
        FAIL("expected rejection");
    }
    catch (Error const& e)
    {
        CHECK(e.kind() == ErrorKind::patch_degenerate);
    }

    auto automatic = build_patch(disk, {1, 0}, 0.5);
    CHECK(automatic.collar_fraction() == doctest::Approx(0.45));
}

TEST_CASE("patch separation holds for automatically chosen collars")
{
    auto domain = fourier3();
    CounterRng rng(11, 0);
    for (int i = 0; i < 10; ++i)
    {
        Vec2 const x0 = domain.boundary().point(rng.uniform());
        auto patch = build_patch(domain, x0, 0.2 + 0.3 * rng.uniform());
        CHECK(patch.separated(patch.collar_fraction()));
        for (auto const& s : patch.sigma_samples())
            CHECK((s - x0).norm() >= 2 * patch.collar_fraction() * patch.radius());
    }
}

TEST_CASE("patch region classification")
{
    auto hd = half_disk_patch();
    CHECK(hd.contains({0, 0.5}));
    CHECK(!hd.contains({0, -0.1}));
    CHECK(!hd.contains({0.9, 0.9}));
    CHECK(hd.distance({0, 0.1}) == doctest::Approx(0.1));
    CHECK(hd.distance({0, 0.95}) == doctest::Approx(0.05));
    CHECK(hd.project({0.2, 0.01}).part == BoundaryPart::gamma);
    CHECK(hd.project({0, 0.99}).part == BoundaryPart::sigma);
}

TEST_CASE("three-piece path on a flat boundary is exact")
{
    double const rho = 0.05;
    auto path = three_piece_path(PlanarDomain::half_plane(), {0, 0}, {rho, 0});
    CHECK(path.rise().length == doctest::Approx(rho).epsilon(1e-14));
    CHECK(path.cigar().length == doctest::Approx(rho).epsilon(1e-14));
    CHECK(path.descent().length == doctest::Approx(rho).epsilon(1e-14));
    for (double d : path.cigar().delta)
        CHECK(d == doctest::Approx(rho).epsilon(1e-14));
    for (std::size_t i = 0; i < path.rise().points.size(); ++i)
        CHECK(path.rise().delta[i] == doctest::Approx(path.rise().points[i].y()));
    CHECK(path.max_cigar_deviation() < 1e-14);
}

TEST_CASE("three-piece path on the disk")
{
    auto disk = PlanarDomain::disk();
    auto path = three_piece_path(disk, {1, 0}, {std::cos(0.1), std::sin(0.1)});
    CHECK(path.max_cigar_deviation() <= 0.2);
    for (std::size_t i = 0; i < path.rise().points.size(); ++i)
    {
        double const s = path.rho() * i / (path.rise().points.size() - 1.0);
        CHECK(path.rise().delta[i] == doctest::Approx(s).epsilon(1e-12));
    }
    CHECK(path.cigar().length <= 2 * path.rho());

    // Inside the collar the offset curve sits at depth rho up to roundoff,
    // so the deviation is at machine level along the whole sweep.
    for (double ang : {0.2, 0.1, 0.05, 0.01, 0.001})
    {
        auto p = three_piece_path(disk, {1, 0}, {std::cos(ang), std::sin(ang)});
        CHECK(p.max_cigar_deviation() < 1e-10);
    }
    auto f3 = fourier3();
    auto wavy = three_piece_path(f3, f3.boundary().point(0.02), f3.boundary().point(0.05));
    CHECK(wavy.max_cigar_deviation() < 1e-8);

    try
    {
        three_piece_path(disk, {1, 0}, {-1, 0});
        FAIL("expected TubularViolation");
    }
    catch (Error const& e)
    {
        CHECK(e.kind() == ErrorKind::tubular_violation);
    }
}

TEST_CASE("tubular round trip on random collar points")
{
    auto domain = fourier3();
    auto const& curve = domain.boundary();
    double const r_d = domain.tubular_radius();
    double worst = 0;
    for (int i = 0; i < 10000; ++i)
    {
        CounterRng rng(99, i);
        double const s = rng.uniform();
        double const depth = r_d * rng.uniform();
        Vec2 const x = curve.point(s) + depth * curve.inward_normal(s);
        auto p = domain.nearest_point(x);
        Vec2 const back = p.point + p.delta * domain.inward_normal(p.point);
        worst = std::max(worst, (back - x).norm());
    }
    CHECK(worst < 1e-8 * domain.diameter());
}

TEST_CASE("catalog curves validate")
{
    BoundaryCurve::circle({0, 0}, 1).validate();
    BoundaryCurve::ellipse(2, 1).validate();
    BoundaryCurve::fourier({0, 0, 0.1}).validate();
    auto bump = BoundaryCurve::bump(0.5, 0.3, 0.8);
    bump.validate();
    CHECK(bump.holder_alpha() == 0.5);
    CHECK(BoundaryCurve::circle({0, 0}, 1).holder_const() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(BoundaryCurve::fourier({0.7, 0.5}), Error);
}

TEST_CASE("quasiconvexity constant")
{
    auto disk = PlanarDomain::disk();
    auto est = measure_quasiconvexity(disk, 200, 5);
    CHECK(est.constant == 1.0);
    CHECK(est.non_straight == 0);

    auto wavy = PlanarDomain::bounded(BoundaryCurve::fourier({0, 0, 0, 0, 0.25}));
    auto w = measure_quasiconvexity(wavy, 300, 5);
    CHECK(w.non_straight > 0);
    CHECK(w.constant > 1.0);
    CHECK(w.constant < 3.0);
}

TEST_CASE("domain config parsing")
{
    auto spec = parse_domain(nlohmann::json::parse(R"({"kind":"fourier_disk","coeffs":[0,0,0.1]})"));
    CHECK(spec.kind == DomainKind::fourier_disk);
    CHECK(spec.coeffs.size() == 3);
    auto again = parse_domain(to_json(spec));
    CHECK(again.coeffs == spec.coeffs);

    try
    {
        parse_domain(nlohmann::json::parse(R"({"kind":"disk","radius":1,"colour":"red"})"));
        FAIL("expected ConfigInvalid");
    }
    catch (Error const& e)
    {
        CHECK(e.kind() == ErrorKind::config_invalid);
        CHECK(std::string(e.what()).find("domain.colour") != std::string::npos);
    }
    auto region = make_region(parse_domain(nlohmann::json::parse(R"({"kind":"half_disk"})")));
    CHECK(region->contains({0, 0.5}));

    std::ostringstream os;
    write_curve_csv(BoundaryCurve::circle({0, 0}, 1), 4, os);
    CHECK(os.str().rfind("s,x,y,tx,ty,nx,ny\n", 0) == 0);
}
