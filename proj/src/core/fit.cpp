#include "hqclab/core/fit.hpp"

#include <algorithm>
#include <cmath>

#include "hqclab/core/error.hpp"

namespace hqclab
{
double ExponentFit::decades() const
{
    return (t_min > 0 && t_max > 0) ? std::log10(t_max / t_min) : 0.0;
}

double ExponentFit::operator()(double t) const
{
    return constant * std::pow(t, exponent);
}

ExponentFit fit_power_law(std::span<double const> t, std::span<double const> y)
{
    HQC_REQUIRE(t.size() == y.size(), ErrorKind::invalid_argument,
                "fit_power_law: size mismatch");
    HQC_REQUIRE(t.size() >= 2, ErrorKind::invalid_argument,
                "fit_power_law: need at least two points");

    std::size_t const n = t.size();
    std::vector<double> lx(n), ly(n);
    double tmin = t[0], tmax = t[0];
    for (std::size_t i = 0; i < n; ++i)
    {
        HQC_REQUIRE(t[i] > 0 && y[i] > 0 && std::isfinite(y[i]),
                    ErrorKind::non_positive_data,
                    "fit_power_law: non-positive sample");
        lx[i] = std::log(t[i]);
        ly[i] = std::log(y[i]);
        tmin = std::min(tmin, t[i]);
        tmax = std::max(tmax, t[i]);
    }

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    HQC_REQUIRE(sxx > 0, ErrorKind::invalid_argument,
                "fit_power_law: abscissae are all equal");

    ExponentFit fit;
    fit.exponent = sxy / sxx;
    fit.constant = std::exp(my - fit.exponent * mx);
    double const sse = std::max(0.0, syy - fit.exponent * sxy);
    fit.r2 = syy > 0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    fit.exponent_std_error
        = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
    fit.t_min = tmin;
    fit.t_max = tmax;
    fit.n = n;
    return fit;
}

double fit_through_origin(std::span<double const> t, std::span<double const> y)
{
    HQC_REQUIRE(t.size() == y.size() && !t.empty(),
                ErrorKind::invalid_argument, "fit_through_origin: bad input");
    double num = 0, den = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        num += t[i] * y[i];
        den += t[i] * t[i];
    }
    return num / den;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n)
{
    HQC_REQUIRE(lo > 0 && hi > lo && n >= 2, ErrorKind::invalid_argument,
                "geometric_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> out(n);
    double const ratio = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
    {
        out[i] = lo * std::exp(ratio * static_cast<double>(i));
    }
    out.back() = hi;
    return out;
}

}  // namespace hqclab
