#include "hqclab/harmonic/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hqclab/core/error.hpp"
#include "hqclab/core/quadrature.hpp"
#include "hqclab/core/rng.hpp"
#include "hqclab/harmonic/grid.hpp"
#include "hqclab/harmonic/walk.hpp"

namespace hqclab::harmonic
{
using geometry::BoundaryHit;
using geometry::BoundaryPart;
using geometry::BoundaryPatch;
using geometry::PlanarDomain;
using geometry::Region;

namespace
{
constexpr double inf = std::numeric_limits<double>::infinity();

MeasureEstimate bernoulli(std::size_t hits, std::size_t n)
{
    double p = static_cast<double>(hits) / n;
    double se = n > 1 ? std::sqrt(p * (1 - p) / (n - 1)) : 0.0;
    return {p, se, n};
}

//---------------------------------------------------------------------------//
// Upper half-plane closed forms.

struct HalfPlaneView
{
    BoundaryPatch const* patch = nullptr;  // null: whole half-plane
};

std::optional<HalfPlaneView> half_plane_view(Region const& region)
{
    if (auto const* p = dynamic_cast<BoundaryPatch const*>(&region))
    {
        if (p->domain().is_half_plane())
            return HalfPlaneView{p};
    }
    else if (auto const* d = dynamic_cast<PlanarDomain const*>(&region))
    {
        if (d->is_half_plane())
            return HalfPlaneView{};
    }
    return std::nullopt;
}

BoundaryHit line_hit(HalfPlaneView const& view, double x)
{
    Vec2 p{x, 0.0};
    if (!view.patch)
        return {p, BoundaryPart::boundary};
    bool inside = (p - view.patch->center()).norm() < view.patch->radius();
    return {p, inside ? BoundaryPart::gamma : BoundaryPart::sigma};
}

// Poisson-kernel mass of {x : target contains (x, 0)} seen from y.
double half_plane_measure(HalfPlaneView const& view, Vec2 const& y, BoundaryTarget const& target)
{
    HQC_REQUIRE(y.y() > 0, ErrorKind::invalid_argument, "pole must lie above the boundary line");
    std::vector<double> cuts;
    if (view.patch)
    {
        cuts.push_back(view.patch->center().x() - view.patch->radius());
        cuts.push_back(view.patch->center().x() + view.patch->radius());
    }
    Vec2 c = target.center;
    cuts.push_back(c.x());
    for (double r : {target.r_min, target.r_max})
    {
        if (std::isfinite(r) && r * r >= c.y() * c.y())
        {
            double w = std::sqrt(r * r - c.y() * c.y());
            cuts.push_back(c.x() - w);
            cuts.push_back(c.x() + w);
        }
    }
    for (double a : {target.angle_from, target.angle_from + target.angle_span})
    {
        double s = std::sin(a);
        if (s != 0 && -c.y() / s > 0)
            cuts.push_back(c.x() - c.y() / s * std::cos(a));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto cdf = [&](double x) {
        if (x == inf)
            return 0.5;
        if (x == -inf)
            return -0.5;
        return std::atan((x - y.x()) / y.y()) / pi;
    };
    double total = 0;
    std::vector<double> edges;
    edges.push_back(-inf);
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    edges.push_back(inf);
    for (std::size_t k = 0; k + 1 < edges.size(); ++k)
    {
        double a = edges[k], b = edges[k + 1];
        double mid;
        if (std::isfinite(a) && std::isfinite(b))
            mid = 0.5 * (a + b);
        else if (std::isfinite(b))
            mid = b - 1 - std::abs(b);
        else if (std::isfinite(a))
            mid = a + 1 + std::abs(a);
        else
            mid = 0;
        if (target.contains(line_hit(view, mid)))
            total += cdf(b) - cdf(a);
    }
    return total;
}

void check_grid_region(Region const& region)
{
    HQC_REQUIRE(region.bounds().bounded(), ErrorKind::invalid_argument,
                "grid backend needs a bounded region");
}

BoundaryData indicator(BoundaryTarget const& target)
{
    return [target](BoundaryHit const& h) { return target.contains(h) ? 1.0 : 0.0; };
}

void require_patch_pole(BoundaryPatch const& patch, Vec2 const& y)
{
    HQC_REQUIRE(patch.contains(y), ErrorKind::invalid_argument, "pole is outside the patch");
}

}  // namespace

//---------------------------------------------------------------------------//
bool BoundaryTarget::contains(BoundaryHit const& hit) const
{
    if (part && hit.part != *part)
        return false;
    Vec2 d = hit.point - center;
    double r = d.norm();
    if (r < r_min || r >= r_max)
        return false;
    if (angle_span >= two_pi)
        return true;
    double a = std::atan2(d.y(), d.x());
    double rel = std::fmod(a - angle_from, two_pi);
    if (rel < 0)
        rel += two_pi;
    return rel < angle_span;
}

std::string BoundaryTarget::describe() const
{
    std::ostringstream os;
    os << "target(";
    if (part)
        os << (*part == BoundaryPart::gamma   ? "gamma"
               : *part == BoundaryPart::sigma ? "sigma"
                                              : "boundary")
           << ",";
    os << "r in [" << r_min << "," << r_max << "), angle " << angle_from << "+" << angle_span
       << ")";
    return os.str();
}

BoundaryTarget BoundaryTarget::whole()
{
    return {};
}

BoundaryTarget BoundaryTarget::of_part(BoundaryPart p)
{
    BoundaryTarget t;
    t.part = p;
    return t;
}

BoundaryTarget BoundaryTarget::arc(Vec2 const& center, double from, double span)
{
    BoundaryTarget t;
    t.center = center;
    t.angle_from = from;
    t.angle_span = span;
    return t;
}

BoundaryTarget BoundaryTarget::outside_ball(Vec2 const& center,
                                            double s,
                                            std::optional<BoundaryPart> part)
{
    BoundaryTarget t;
    t.part = part;
    t.center = center;
    // closed complement of the open ball
    t.r_min = s;
    return t;
}

//---------------------------------------------------------------------------//
MeasureEstimate harmonic_measure(Region const& region,
                                 Vec2 const& y,
                                 BoundaryTarget const& target,
                                 SolverParams const& params,
                                 Backend backend)
{
    switch (backend)
    {
        case Backend::closed_form: {
            auto view = half_plane_view(region);
            HQC_REQUIRE(view.has_value(), ErrorKind::invalid_argument,
                        "closed-form harmonic measure is only available on the half-plane");
            HQC_REQUIRE(region.contains(y), ErrorKind::invalid_argument,
                        "pole is outside the region");
            return {half_plane_measure(*view, y, target), 0.0, 0};
        }
        case Backend::walk_on_spheres: {
            BoundaryTarget const one[] = {target};
            return harmonic_measures(region, y, one, params).front();
        }
        case Backend::grid: {
            check_grid_region(region);
            // Non-owning alias: the solution does not outlive this call.
            std::shared_ptr<Region const> alias(std::shared_ptr<Region const>{}, &region);
            auto sol = grid_solve(alias, indicator(target), params.grid_h);
            return {std::clamp(sol.interpolate(y), 0.0, 1.0), 0.0, 0};
        }
        case Backend::poisson_disk: break;
    }
    throw Error(ErrorKind::invalid_argument,
                "harmonic measure does not support backend " + to_string(backend));
}

std::vector<MeasureEstimate> harmonic_measures(Region const& region,
                                               Vec2 const& y,
                                               std::span<BoundaryTarget const> targets,
                                               SolverParams const& params)
{
    HQC_REQUIRE(!half_plane_view(region) || dynamic_cast<BoundaryPatch const*>(&region),
                ErrorKind::invalid_argument,
                "walk-on-spheres is not run on the unbounded half-plane");
    auto batch = run_walks(region, y, params);
    std::vector<MeasureEstimate> out;
    out.reserve(targets.size());
    for (auto const& t : targets)
    {
        std::size_t hits = 0;
        for (auto const& e : batch.exits)
            hits += t.contains(e.hit) ? 1 : 0;
        out.push_back(bernoulli(hits, batch.exits.size()));
    }
    return out;
}

//---------------------------------------------------------------------------//
LeakProfile sigma_leak_profile(BoundaryPatch const& patch,
                               std::span<double const> t_grid,
                               SolverParams const& params,
                               Backend backend)
{
    HQC_REQUIRE(t_grid.size() >= 2, ErrorKind::invalid_argument, "need at least two heights");
    double t_max = patch.collar_fraction() * patch.radius();
    for (double t : t_grid)
        HQC_REQUIRE(t > 0 && t < t_max, ErrorKind::invalid_argument,
                    "height " + std::to_string(t) + " is outside (0, c r0)");

    auto sigma = BoundaryTarget::of_part(BoundaryPart::sigma);
    LeakProfile out;
    out.points.resize(t_grid.size());
    if (backend == Backend::grid)
    {
        std::shared_ptr<Region const> alias(std::shared_ptr<Region const>{}, &patch);
        auto sol = grid_solve(alias, indicator(sigma), params.grid_h);
        for (std::size_t i = 0; i < t_grid.size(); ++i)
            out.points[i] = {t_grid[i],
                             {std::clamp(sol.interpolate(patch.normal_point(t_grid[i])), 0.0, 1.0),
                              0.0, 0}};
    }
    else
    {
        for (std::size_t i = 0; i < t_grid.size(); ++i)
        {
            SolverParams p = params;
            // distinct streams per height
            p.seed = CounterRng::mix(params.seed ^ (0x9E3779B97F4A7C15ull * (i + 1)));
            out.points[i] = {t_grid[i],
                             harmonic_measure(patch, patch.normal_point(t_grid[i]), sigma, p,
                                              backend)};
        }
    }

    std::vector<double> ts, ws;
    for (auto const& pt : out.points)
    {
        ts.push_back(pt.x);
        ws.push_back(pt.measure.value);
    }
    out.slope = fit_through_origin(ts, ws);
    bool positive = std::all_of(ws.begin(), ws.end(), [](double w) { return w > 0; });
    if (positive)
        out.fit = fit_power_law(ts, ws);
    for (std::size_t i = 0; i + 1 < out.points.size(); ++i)
    {
        auto const& a = out.points[i].measure;
        auto const& b = out.points[i + 1].measure;
        if ((out.points[i + 1].x - out.points[i].x) * (b.value - a.value)
            < -3 * std::hypot(a.std_error, b.std_error))
            out.increasing = false;
    }
    for (auto const& pt : out.points)
    {
        double s = std::hypot(pt.measure.std_error, 0.05 * pt.measure.value);
        if (pt.measure.value > out.slope * pt.x + 5 * s)
            ++out.outliers;
    }
    return out;
}

//---------------------------------------------------------------------------//
TailProfile gamma_tail_profile(BoundaryPatch const& patch,
                               Vec2 const& y,
                               std::span<double const> s_grid,
                               SolverParams const& params,
                               Backend backend)
{
    require_patch_pole(patch, y);
    TailProfile out;
    out.delta = patch.domain().distance(y);
    for (double s : s_grid)
        HQC_REQUIRE(s > out.delta && s <= patch.radius(), ErrorKind::invalid_argument,
                    "radius " + std::to_string(s) + " is outside (delta_D(y), r0]");

    out.points.resize(s_grid.size());
    Vec2 const x0 = patch.center();
    if (backend == Backend::walk_on_spheres)
    {
        auto batch = run_walks(patch, y, params);
        std::vector<double> r;
        for (auto const& e : batch.exits)
            if (e.hit.part == BoundaryPart::gamma)
                r.push_back((e.hit.point - x0).norm());
        std::sort(r.begin(), r.end());
        for (std::size_t i = 0; i < s_grid.size(); ++i)
        {
            double s = s_grid[i];
            std::size_t above = 0;
            if (s < patch.radius())
                above = static_cast<std::size_t>(r.end()
                                                 - std::upper_bound(r.begin(), r.end(), s));
            out.points[i] = {s, bernoulli(above, batch.exits.size())};
        }
    }
    else
    {
        for (std::size_t i = 0; i < s_grid.size(); ++i)
        {
            auto target = BoundaryTarget::outside_ball(x0, s_grid[i], BoundaryPart::gamma);
            MeasureEstimate m;
            if (s_grid[i] < patch.radius())
                m = harmonic_measure(patch, y, target, params, backend);
            out.points[i] = {s_grid[i], m};
        }
    }
    for (std::size_t i = 0; i < out.points.size(); ++i)
    {
        out.constant = std::max(out.constant, out.points[i].measure.value * out.points[i].x
                                                  / out.delta);
        for (std::size_t j = 0; j < out.points.size(); ++j)
        {
            auto const& a = out.points[i];
            auto const& b = out.points[j];
            if (a.x < b.x
                && b.measure.value - a.measure.value
                       > 3 * std::hypot(a.measure.std_error, b.measure.std_error) + 1e-12)
                out.monotone = false;
        }
    }
    return out;
}

//---------------------------------------------------------------------------//
namespace
{
struct LayerGrid
{
    std::vector<double> s;   // s_0 = s_min < ... < s_K = r0
    std::vector<double> sm;  // s^mu
};

LayerGrid layer_grid(double s_min, double r0, double mu, std::size_t n)
{
    LayerGrid g;
    g.s = geometric_grid(s_min, r0, n);
    g.sm.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        g.sm[k] = std::pow(g.s[k], mu);
    return g;
}

// mu int_{s_min}^{r0} s^(mu-1) F ds with exact weights for s^(mu-1) and
// trapezoidal F on each panel.
double layer_sum(LayerGrid const& g, std::vector<double> const& f)
{
    double q = 0;
    for (std::size_t k = 0; k + 1 < g.s.size(); ++k)
        q += (g.sm[k + 1] - g.sm[k]) * 0.5 * (f[k] + f[k + 1]);
    return q;
}

// Contribution of one Gamma exit at distance r to the quadrature: the same
// sum with F replaced by the indicator r > s, plus s_min^mu for [0, s_min].
struct WalkQuadrature
{
    LayerGrid const& g;
    double operator()(double r) const
    {
        double q = g.sm.front();
        auto above = static_cast<std::size_t>(std::lower_bound(g.s.begin(), g.s.end(), r)
                                              - g.s.begin());
        // nodes 0..above-1 satisfy s_k < r
        if (above == 0)
            return q;
        q += g.sm[above - 1] - g.sm.front();
        if (above < g.s.size())
            q += 0.5 * (g.sm[above] - g.sm[above - 1]);
        return q;
    }
};

}  // namespace

LayerCakeResult layer_cake_moment(BoundaryPatch const& patch,
                                  Vec2 const& y,
                                  double mu,
                                  SolverParams const& params,
                                  Backend backend,
                                  LayerCakeOptions const& options)
{
    HQC_REQUIRE(mu > 0 && std::isfinite(mu), ErrorKind::invalid_argument, "mu must be positive");
    require_patch_pole(patch, y);
    LayerCakeResult out;
    out.delta = patch.domain().distance(y);
    out.s_min = options.s_min_fraction * out.delta;
    double r0 = patch.radius();
    HQC_REQUIRE(options.s_points >= 2 && out.s_min > 0 && out.s_min < r0,
                ErrorKind::quadrature_unstable, "layer-cake grid is empty");
    auto g = layer_grid(out.s_min, r0, mu, options.s_points);
    auto below = std::count_if(g.s.begin(), g.s.end(), [&](double s) { return s < out.delta; });
    HQC_REQUIRE(below >= 16, ErrorKind::quadrature_unstable,
                "only " + std::to_string(below) + " quadrature nodes below delta_D(y) = "
                    + std::to_string(out.delta));
    Vec2 const x0 = patch.center();

    if (backend == Backend::walk_on_spheres)
    {
        auto a = run_walks(patch, y, params, 0);
        auto b = run_walks(patch, y, params, params.n_walks);
        std::vector<double> direct(a.exits.size()), gamma(a.exits.size()),
            quad(b.exits.size());
        WalkQuadrature wq{g};
        for (std::size_t i = 0; i < a.exits.size(); ++i)
        {
            bool on = a.exits[i].hit.part == BoundaryPart::gamma;
            gamma[i] = on ? 1.0 : 0.0;
            direct[i] = on ? std::pow((a.exits[i].hit.point - x0).norm(), mu) : 0.0;
        }
        for (std::size_t i = 0; i < b.exits.size(); ++i)
        {
            bool on = b.exits[i].hit.part == BoundaryPart::gamma;
            quad[i] = on ? wq((b.exits[i].hit.point - x0).norm()) : 0.0;
        }
        out.direct = sample_mean(direct);
        out.gamma_measure = sample_mean(gamma);
        out.quadrature = sample_mean(quad);
        out.sigma = std::hypot(out.direct.std_error, out.quadrature.std_error);
    }
    else if (backend == Backend::closed_form)
    {
        auto view = half_plane_view(patch);
        HQC_REQUIRE(view.has_value(), ErrorKind::invalid_argument,
                    "closed-form layer cake is only available on the half-plane");
        auto kernel = [&](double x) {
            double dx = x - y.x();
            return y.y() / (pi * (dx * dx + y.y() * y.y()));
        };
        auto tail = [&](double s) {
            return half_plane_measure(*view, y,
                                      BoundaryTarget::outside_ball(x0, s, BoundaryPart::gamma));
        };
        auto gl = gauss_legendre(24);
        // direct: int_0^r0 s^mu [P(x0+s) + P(x0-s)] ds on geometric panels
        auto panels = geometric_grid(r0 * 1e-14, r0, 400);
        double direct = 0;
        for (std::size_t k = 0; k + 1 < panels.size(); ++k)
        {
            double a = panels[k], w = panels[k + 1] - panels[k];
            for (std::size_t q = 0; q < gl.nodes.size(); ++q)
            {
                double s = a + w * gl.nodes[q];
                direct += w * gl.weights[q] * std::pow(s, mu)
                          * (kernel(x0.x() + s) + kernel(x0.x() - s));
            }
        }
        // [0, s_min] with s = s_min v^(1/mu): s_min^mu int_0^1 F dv
        double head = 0;
        for (std::size_t q = 0; q < gl.nodes.size(); ++q)
            head += gl.weights[q] * tail(out.s_min * std::pow(gl.nodes[q], 1 / mu));
        head *= std::pow(out.s_min, mu);
        auto quad_on = [&](std::size_t n) {
            auto gg = layer_grid(out.s_min, r0, mu, n);
            std::vector<double> f(n);
            for (std::size_t k = 0; k < n; ++k)
                f[k] = tail(gg.s[k]);
            return head + layer_sum(gg, f);
        };
        double q_full = quad_on(options.s_points);
        double q_half = quad_on(options.s_points / 2 + 1);
        out.direct = {direct, 0.0};
        out.quadrature = {q_full, 0.0};
        out.gamma_measure = {half_plane_measure(*view, y, BoundaryTarget::of_part(BoundaryPart::gamma)),
                             0.0};
        out.sigma = std::abs(q_full - q_half) + 1e-12 * std::abs(direct);
    }
    else
    {
        throw Error(ErrorKind::invalid_argument,
                    "layer cake supports walk_on_spheres and closed_form backends");
    }
    out.agree = std::abs(out.direct.value - out.quadrature.value) <= 3 * out.sigma;
    return out;
}

}  // namespace hqclab::harmonic
