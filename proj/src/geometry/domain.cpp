#include "hqclab/geometry/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "hqclab/core/error.hpp"
#include "hqclab/core/rng.hpp"

namespace hqclab::geometry
{
namespace
{
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kCollarSamples = 1000;
constexpr int kRadiusBisections = 40;

struct Root
{
    double s;
    double dist;
};

// (p(s) - x) . p'(s) and its derivative in s.
struct Orthogonality
{
    BoundaryCurve const& curve;
    Vec2 const& x;

    double value(double s) const
    {
        return (curve.point(s) - x).dot(curve.derivative(s));
    }
    double slope(double s) const
    {
        Vec2 const d = curve.derivative(s);
        return d.squaredNorm() + (curve.point(s) - x).dot(curve.second_derivative(s));
    }
};

double dist2(BoundaryCurve const& curve, Vec2 const& x, double s)
{
    return (curve.point(s) - x).squaredNorm();
}

double golden_minimize(BoundaryCurve const& curve, Vec2 const& x, double a, double b)
{
    double const g = 0.5 * (std::sqrt(5.0) - 1);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = dist2(curve, x, c), fd = dist2(curve, x, d);
    for (int i = 0; i < 80 && b - a > 1e-15; ++i)
    {
        if (fc <= fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = dist2(curve, x, c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = dist2(curve, x, d);
        }
    }
    return 0.5 * (a + b);
}

// Newton on the orthogonality residual, safeguarded by bisection on the
// bracket [a, b] when it brackets a sign change.
double refine_root(BoundaryCurve const& curve, Vec2 const& x, double s0, double a, double b)
{
    Orthogonality const g{curve, x};
    double ga = g.value(a), gb = g.value(b);
    if (!(ga < 0 && gb > 0))
        return golden_minimize(curve, x, a, b);

    double s = s0;
    for (int iter = 0; iter < 100; ++iter)
    {
        double const gs = g.value(s);
        if (gs == 0)
            return s;
        if (gs < 0)
            a = s;
        else
            b = s;
        double const slope = g.slope(s);
        double next = s - gs / slope;
        if (!std::isfinite(next) || next <= a || next >= b)
            next = 0.5 * (a + b);
        if (std::abs(next - s) < 1e-15 || b - a < 1e-15)
            return next;
        s = next;
    }
    return s;
}

// Local minimizers of |p(s) - x| sorted by distance, ties by parameter.
std::vector<Root> projection_roots(BoundaryCurve const& curve, Vec2 const& x, std::size_t max_roots)
{
    auto samples = curve.coarse_samples();
    std::size_t const n = samples.size();
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i)
        d2[i] = (samples[i] - x).squaredNorm();

    std::vector<std::size_t> minima;
    for (std::size_t i = 0; i < n; ++i)
    {
        double const prev = d2[(i + n - 1) % n], next = d2[(i + 1) % n];
        if (d2[i] <= prev && d2[i] < next)
            minima.push_back(i);
    }
    if (minima.empty())
    {
        minima.push_back(static_cast<std::size_t>(
            std::min_element(d2.begin(), d2.end()) - d2.begin()));
    }
    std::stable_sort(minima.begin(), minima.end(),
                     [&](std::size_t a, std::size_t b) { return d2[a] < d2[b]; });
    if (minima.size() > max_roots)
        minima.resize(max_roots);

    std::vector<Root> roots;
    double const h = 1.0 / static_cast<double>(n);
    for (std::size_t i : minima)
    {
        double const s0 = static_cast<double>(i) * h;
        double const s = refine_root(curve, x, s0, s0 - h, s0 + h);
        roots.push_back({wrap_parameter(s), std::sqrt(dist2(curve, x, s))});
    }
    std::stable_sort(roots.begin(), roots.end(), [](Root const& a, Root const& b) {
        return a.dist < b.dist || (a.dist == b.dist && a.s < b.s);
    });
    return roots;
}

bool ties(Root const& best, Root const& other)
{
    return parameter_gap(best.s, other.s) > 1e-7
           && other.dist - best.dist <= 1e-9 * (1 + best.dist);
}
}  // namespace

struct PlanarDomain::Impl
{
    std::optional<BoundaryCurve> curve;
    double uniqueness_radius = kInf;
    double diameter = kInf;
};

PlanarDomain::PlanarDomain(std::shared_ptr<Impl const> impl) : impl_(std::move(impl)) {}

PlanarDomain PlanarDomain::half_plane()
{
    return PlanarDomain(std::make_shared<Impl>());
}

PlanarDomain PlanarDomain::disk(double radius, Vec2 const& center)
{
    return bounded(BoundaryCurve::circle(center, radius));
}

PlanarDomain PlanarDomain::bounded(BoundaryCurve curve)
{
    auto impl = std::make_shared<Impl>();
    impl->diameter = curve.diameter();
    impl->curve = std::move(curve);
    impl->uniqueness_radius = 0;
    PlanarDomain probe(impl);

    // Largest depth at which every sampled collar point projects back to its
    // foot point.
    std::vector<double> feet(kCollarSamples);
    for (std::size_t j = 0; j < kCollarSamples; ++j)
        feet[j] = CounterRng(0x5eed0fc011a7ull, j).uniform();
    double lo = 0, hi = impl->diameter;
    for (int iter = 0; iter < kRadiusBisections; ++iter)
    {
        double const mid = 0.5 * (lo + hi);
        bool ok = true;
        for (double s : feet)
        {
            if (!probe.collar_point_ok(s, mid))
            {
                ok = false;
                break;
            }
        }
        (ok ? lo : hi) = mid;
    }
    impl->uniqueness_radius = lo;
    return probe;
}

bool PlanarDomain::is_half_plane() const
{
    return !impl_->curve.has_value();
}

BoundaryCurve const& PlanarDomain::boundary() const
{
    HQC_REQUIRE(impl_->curve, ErrorKind::invalid_argument,
                "the half-plane has no closed boundary curve");
    return *impl_->curve;
}

bool PlanarDomain::contains(Vec2 const& x) const
{
    if (is_half_plane())
        return x.y() > 0;
    return impl_->curve->contains(x);
}

Projection PlanarDomain::closest(Vec2 const& x) const
{
    if (is_half_plane())
        return {Vec2(x.x(), 0.0), std::abs(x.y()), x.x()};

    auto const& curve = *impl_->curve;
    if (curve.is_circle())
    {
        Vec2 const d = x - curve.center();
        double const r = d.norm();
        double const R = curve.circle_radius();
        if (r == 0)
            return {curve.point(0), R, 0};
        double const s = curve.parameter_of(x);
        return {curve.center() + (R / r) * d, std::abs(R - r), s};
    }
    auto roots = projection_roots(curve, x, 3);
    return {curve.point(roots.front().s), roots.front().dist, roots.front().s};
}

Projection PlanarDomain::nearest_point(Vec2 const& x) const
{
    Projection result;
    if (is_half_plane() || impl_->curve->is_circle())
    {
        result = closest(x);
        if (!is_half_plane())
        {
            double const r = (x - impl_->curve->center()).norm();
            HQC_REQUIRE(r > 1e-14 * impl_->curve->circle_radius(),
                        ErrorKind::non_unique_projection,
                        "every boundary point of the circle is nearest to its center");
        }
    }
    else
    {
        auto roots = projection_roots(*impl_->curve, x, 4);
        for (std::size_t i = 1; i < roots.size(); ++i)
        {
            HQC_REQUIRE(!ties(roots.front(), roots[i]), ErrorKind::non_unique_projection,
                        "distinct boundary points are equally near");
        }
        result = {impl_->curve->point(roots.front().s), roots.front().dist, roots.front().s};
    }
    HQC_REQUIRE(result.delta < impl_->uniqueness_radius, ErrorKind::outside_tubular,
                "point lies outside the tubular neighborhood");
    return result;
}

double PlanarDomain::distance(Vec2 const& x) const
{
    return closest(x).delta;
}

BoundaryHit PlanarDomain::project(Vec2 const& x) const
{
    return {closest(x).point, BoundaryPart::boundary};
}

BoundingBox PlanarDomain::bounds() const
{
    if (is_half_plane())
        return {Vec2(-kInf, 0), Vec2(kInf, kInf)};
    auto const& curve = *impl_->curve;
    Vec2 lo = Vec2::Constant(kInf), hi = Vec2::Constant(-kInf);
    std::size_t const n = 4 * curve.resolution();
    for (std::size_t i = 0; i < n; ++i)
    {
        Vec2 const p = curve.point(static_cast<double>(i) / n);
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    // Pad by the polyline sagitta so the box encloses the curve.
    double const pad = 1e-3 * impl_->diameter;
    return {lo.array() - pad, hi.array() + pad};
}

std::string PlanarDomain::describe() const
{
    if (is_half_plane())
        return "half_plane";
    std::ostringstream os;
    os << impl_->curve->name();
    return os.str();
}

Vec2 PlanarDomain::boundary_point(double s) const
{
    if (is_half_plane())
        return {s, 0.0};
    return impl_->curve->point(s);
}

Vec2 PlanarDomain::boundary_derivative(double s) const
{
    if (is_half_plane())
        return {1.0, 0.0};
    return impl_->curve->derivative(s);
}

Vec2 PlanarDomain::normal_at(double s) const
{
    if (is_half_plane())
        return {0.0, 1.0};
    return impl_->curve->inward_normal(s);
}

Vec2 PlanarDomain::normal_derivative(double s) const
{
    if (is_half_plane())
        return Vec2::Zero();
    auto const& curve = *impl_->curve;
    Vec2 const d1 = curve.derivative(s);
    Vec2 const d2 = curve.second_derivative(s);
    double const speed = d1.norm();
    Vec2 const t = d1 / speed;
    Vec2 const dt = (d2 - t * t.dot(d2)) / speed;
    return perp(dt);
}

double PlanarDomain::parameter_of(Vec2 const& xi) const
{
    if (is_half_plane())
        return xi.x();
    return impl_->curve->parameter_of(xi);
}

Vec2 PlanarDomain::inward_normal(Vec2 const& xi) const
{
    Vec2 const nu = normal_at(parameter_of(xi));
    HQC_REQUIRE(contains(xi + 1e-7 * std::min(1.0, diameter()) * nu),
                ErrorKind::degenerate_tangent, "normal does not point into the domain");
    return nu;
}

double PlanarDomain::tubular_radius() const
{
    return 0.5 * impl_->uniqueness_radius;
}

double PlanarDomain::uniqueness_radius() const
{
    return impl_->uniqueness_radius;
}

double PlanarDomain::diameter() const
{
    return impl_->diameter;
}

bool PlanarDomain::collar_point_ok(double s, double r) const
{
    if (is_half_plane())
        return true;
    auto const& curve = *impl_->curve;
    Vec2 const x = curve.point(s) + r * curve.inward_normal(s);
    if (!curve.contains(x))
        return false;
    if (curve.is_circle())
        return r < curve.circle_radius() * (1 - 1e-12);
    auto roots = projection_roots(curve, x, 4);
    Root const& best = roots.front();
    if (parameter_gap(best.s, s) > 1e-6 || std::abs(best.dist - r) > 1e-8 * (1 + r))
        return false;
    for (std::size_t i = 1; i < roots.size(); ++i)
    {
        if (ties(best, roots[i]))
            return false;
    }
    return true;
}

}  // namespace hqclab::geometry
