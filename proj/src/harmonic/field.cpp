#include "hqclab/harmonic/field.hpp"

#include <cmath>

#include "hqclab/core/error.hpp"

namespace hqclab::harmonic
{
std::string to_string(Backend b)
{
    switch (b)
    {
        case Backend::closed_form: return "closed_form";
        case Backend::poisson_disk: return "poisson_disk";
        case Backend::walk_on_spheres: return "walk_on_spheres";
        case Backend::grid: return "grid";
    }
    return "unknown";
}

void SolverParams::validate() const
{
    HQC_REQUIRE(eps_shell > 0 && std::isfinite(eps_shell), ErrorKind::invalid_argument,
                "eps_shell must be positive");
    HQC_REQUIRE(n_walks > 0, ErrorKind::invalid_argument, "n_walks must be positive");
    HQC_REQUIRE(max_steps > 0, ErrorKind::invalid_argument, "max_steps must be positive");
    HQC_REQUIRE(grid_h > 0 && std::isfinite(grid_h), ErrorKind::invalid_argument,
                "grid_h must be positive");
}

double default_eps_shell(geometry::Region const& region)
{
    auto box = region.bounds();
    if (!box.bounded())
        return 1e-4;
    return 1e-4 * (box.hi - box.lo).norm();
}

Estimate HarmonicField::difference(Vec2 const& a, Vec2 const& b) const
{
    auto ua = value(a);
    auto ub = value(b);
    return {ua.value - ub.value, std::hypot(ua.std_error, ub.std_error)};
}

GradientEstimate gradient_estimate(HarmonicField const& field,
                                   Vec2 const& x,
                                   std::optional<double> step)
{
    auto const& region = field.region();
    HQC_REQUIRE(region.contains(x), ErrorKind::invalid_argument,
                "gradient point is outside the region");
    double delta = region.distance(x);
    double h = step ? *step : delta / 8;
    HQC_REQUIRE(h > 0 && h < delta / 2, ErrorKind::step_too_large,
                "difference step " + std::to_string(h) + " is not below delta/2 = "
                    + std::to_string(delta / 2));
    HQC_REQUIRE(delta > field.step_floor(), ErrorKind::step_too_large,
                "point depth " + std::to_string(delta) + " is below the backend floor "
                    + std::to_string(field.step_floor()));

    GradientEstimate out;
    out.step = h;
    for (int k = 0; k < 2; ++k)
    {
        Vec2 e = Vec2::Zero();
        e[k] = h;
        auto d = field.difference(x + e, x - e);
        out.finite_difference[k] = d.value / (2 * h);
        out.std_error[k] = d.std_error / (2 * h);
    }
    if (auto g = field.exact_gradient(x))
    {
        out.gradient = *g;
        out.std_error = Vec2::Zero();
        out.exact = true;
    }
    else
    {
        out.gradient = out.finite_difference;
    }
    return out;
}

//---------------------------------------------------------------------------//
ClosedFormField::ClosedFormField(std::shared_ptr<geometry::Region const> region,
                                 ValueFn value,
                                 GradFn gradient,
                                 std::string name)
    : region_(std::move(region))
    , value_(std::move(value))
    , gradient_(std::move(gradient))
    , name_(std::move(name))
{
    HQC_REQUIRE(region_ && value_ && gradient_, ErrorKind::invalid_argument,
                "closed-form field needs a region, value and gradient");
}

std::shared_ptr<ClosedFormField> linear_field(std::shared_ptr<geometry::Region const> region,
                                              Vec2 const& a,
                                              double c)
{
    return std::make_shared<ClosedFormField>(
        std::move(region), [a, c](Vec2 const& x) { return a.dot(x) + c; },
        [a](Vec2 const&) { return a; }, "linear");
}

std::shared_ptr<ClosedFormField> polar_power_field(std::shared_ptr<geometry::Region const> region,
                                                   double mu)
{
    auto value = [mu](Vec2 const& x) {
        double r = x.norm();
        if (r == 0)
            return 0.0;
        return std::pow(r, mu) * std::cos(mu * std::atan2(x.y(), x.x()));
    };
    // grad Re(z^mu) = (Re, -Im) of mu z^(mu-1)
    auto grad = [mu](Vec2 const& x) -> Vec2 {
        double r = x.norm();
        if (r == 0)
            return Vec2::Zero();
        double th = std::atan2(x.y(), x.x());
        double m = mu * std::pow(r, mu - 1);
        return {m * std::cos((mu - 1) * th), -m * std::sin((mu - 1) * th)};
    };
    return std::make_shared<ClosedFormField>(std::move(region), value, grad,
                                             "polar_power(" + std::to_string(mu) + ")");
}

std::shared_ptr<ClosedFormField> saddle_field(std::shared_ptr<geometry::Region const> region)
{
    return std::make_shared<ClosedFormField>(
        std::move(region), [](Vec2 const& x) { return x.x() * x.x() - x.y() * x.y(); },
        [](Vec2 const& x) { return Vec2{2 * x.x(), -2 * x.y()}; }, "saddle");
}

std::shared_ptr<ClosedFormField> constant_field(std::shared_ptr<geometry::Region const> region,
                                                double c)
{
    return std::make_shared<ClosedFormField>(
        std::move(region), [c](Vec2 const&) { return c; },
        [](Vec2 const&) { return Vec2{0, 0}; }, "constant");
}

}  // namespace hqclab::harmonic
