#pragma once

#include <span>
#include <vector>

namespace hqclab
{
//! Power law y ~ constant * t^exponent fitted by least squares in log-log.
struct ExponentFit
{
    double exponent = 0;
    double constant = 0;
    double r2 = 0;
    double t_min = 0;
    double t_max = 0;
    double exponent_std_error = 0;
    std::size_t n = 0;

    double decades() const;
    double operator()(double t) const;
};

//! OLS on (log t, log y). Throws NonPositiveData on t <= 0 or y <= 0 and
//! InvalidArgument with fewer than two points.
ExponentFit fit_power_law(std::span<double const> t, std::span<double const> y);

//! Slope of a through-origin least-squares line y = slope * t.
double fit_through_origin(std::span<double const> t, std::span<double const> y);

//! Geometric grid of n points from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

}  // namespace hqclab
