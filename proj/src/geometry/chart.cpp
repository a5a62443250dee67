#include "hqclab/geometry/chart.hpp"

#include <algorithm>
#include <cmath>

#include "hqclab/core/error.hpp"

namespace hqclab::geometry
{
namespace
{
constexpr int kBranchSteps = 8192;
constexpr int kConstantSamples = 600;
}  // namespace

double GraphChart::parameter_at(double y) const
{
    // First chart coordinate is increasing in s on the branch.
    auto coord = [this](double s) { return to_chart(domain_.boundary_point(s)).x(); };
    double a = lo_parameter_, b = hi_parameter_;
    double s = base_parameter_;
    for (int iter = 0; iter < 200; ++iter)
    {
        double const f = coord(s) - y;
        if (f == 0)
            break;
        (f < 0 ? a : b) = s;
        double const slope = (rotation_ * domain_.boundary_derivative(s)).x();
        double next = s - f / slope;
        if (!std::isfinite(next) || next <= a || next >= b)
            next = 0.5 * (a + b);
        if (std::abs(next - s) < 1e-16 || b - a < 1e-16)
        {
            s = next;
            break;
        }
        s = next;
    }
    return s;
}

double GraphChart::graph(double y) const
{
    if (domain_.is_half_plane())
        return 0.0;
    if (y == 0)
        return 0.0;
    return to_chart(domain_.boundary_point(parameter_at(y))).y();
}

double GraphChart::slope(double y) const
{
    if (domain_.is_half_plane() || y == 0)
        return 0.0;
    Vec2 const d = rotation_ * domain_.boundary_derivative(parameter_at(y));
    return d.y() / d.x();
}

GraphChart flatten_chart(PlanarDomain const& domain,
                         Vec2 const& q,
                         std::optional<double> radius,
                         std::optional<double> alpha)
{
    GraphChart chart;
    chart.domain_ = domain;
    chart.base_ = q;
    chart.base_parameter_ = domain.parameter_of(q);

    if (domain.is_half_plane())
    {
        chart.rotation_ = Mat2::Identity();
        chart.max_radius_ = std::numeric_limits<double>::infinity();
        chart.radius_ = radius.value_or(1.0);
        chart.alpha_ = alpha.value_or(1.0);
        chart.constant_ = 0;
        return chart;
    }

    auto const& curve = domain.boundary();
    chart.alpha_ = alpha.value_or(curve.holder_alpha());
    double const s0 = chart.base_parameter_;
    Vec2 const t = curve.unit_tangent(s0);
    Vec2 const nu = perp(t);
    chart.rotation_.row(0) = t.transpose();
    chart.rotation_.row(1) = nu.transpose();

    // Grow the branch while the first chart coordinate stays increasing.
    double const ds = 1.0 / kBranchSteps;
    auto increasing = [&](double s) {
        return (chart.rotation_ * curve.derivative(s)).x() > 0;
    };
    double lo = s0, hi = s0;
    while (hi - s0 < 0.5 && increasing(hi + ds))
        hi += ds;
    while (s0 - lo < 0.5 && increasing(lo - ds))
        lo -= ds;
    chart.lo_parameter_ = lo;
    chart.hi_parameter_ = hi;

    // The ball B(0, r) may only meet the curve along the branch.
    double max_r = std::min(chart.to_chart(curve.point(lo)).norm(),
                            chart.to_chart(curve.point(hi)).norm());
    for (int i = 0; i < kBranchSteps; ++i)
    {
        double const s = lo + (1.0 - (hi - lo)) * (i + 0.5) / kBranchSteps + (hi - lo);
        max_r = std::min(max_r, chart.to_chart(curve.point(s)).norm());
    }
    chart.max_radius_ = max_r;
    if (radius)
    {
        HQC_REQUIRE(*radius > 0 && *radius < max_r, ErrorKind::radius_too_large,
                    "chart radius " + std::to_string(*radius)
                        + " exceeds graph radius " + std::to_string(max_r));
        chart.radius_ = *radius;
    }
    else
    {
        // the graph steepens towards the branch ends, so stay within half
        // the tangential extent as well
        double extent = std::min(chart.to_chart(curve.point(hi)).x(),
                                 -chart.to_chart(curve.point(lo)).x());
        chart.radius_ = 0.5 * std::min(max_r, extent);
    }

    // Sample |y| < radius on both sides, geometric near the origin.
    double const y_lo = std::max(-chart.radius_, chart.to_chart(curve.point(lo)).x());
    double const y_hi = std::min(chart.radius_, chart.to_chart(curve.point(hi)).x());
    double constant = 0;
    for (int side = 0; side < 2; ++side)
    {
        double const ymax = side == 0 ? y_hi : -y_lo;
        double const sign = side == 0 ? 1.0 : -1.0;
        for (int i = 0; i < kConstantSamples; ++i)
        {
            double const frac = static_cast<double>(i + 1) / kConstantSamples;
            double const y = sign * ymax
                             * (i < kConstantSamples / 2
                                    ? std::pow(1e-6, 1 - 2 * frac)
                                    : frac);
            double const a = std::abs(y);
            if (a == 0 || a > chart.radius_)
                continue;
            constant = std::max(constant, std::abs(chart.slope(y)) / std::pow(a, chart.alpha_));
            constant = std::max(constant, std::abs(chart.graph(y)) / std::pow(a, 1 + chart.alpha_));
        }
    }
    chart.constant_ = constant;
    return chart;
}

}  // namespace hqclab::geometry
