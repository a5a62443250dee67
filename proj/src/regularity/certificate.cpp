#include "hqclab/regularity/certificate.hpp"

#include <algorithm>
#include <cmath>

#include "hqclab/core/error.hpp"

namespace hqclab::regularity
{
double BasepointHolderCert::prefactor() const
{
    return constant + sup_norm / std::pow(radius(), exponent);
}

double BasepointHolderCert::uniform_prefactor() const
{
    return constant * std::pow(radius(), exponent - 1) + sup_norm / radius();
}

BasepointHolderCert trace_holder_fit(std::span<TraceSample const> samples,
                                     std::shared_ptr<geometry::BoundaryPatch const> patch,
                                     double sup_norm,
                                     double base_value,
                                     std::optional<double> exponent)
{
    HQC_REQUIRE(patch, ErrorKind::invalid_argument, "certificate needs a patch");
    HQC_REQUIRE(samples.size() >= 64, ErrorKind::invalid_argument,
                "trace fit needs at least 64 samples, got " + std::to_string(samples.size()));
    double t_min = INFINITY, t_max = 0;
    for (auto const& s : samples)
    {
        HQC_REQUIRE(std::isfinite(s.distance) && std::isfinite(s.difference),
                    ErrorKind::non_finite_trace, "non-finite trace sample");
        HQC_REQUIRE(s.distance > 0, ErrorKind::invalid_argument,
                    "trace distances must be positive");
        t_min = std::min(t_min, s.distance);
        t_max = std::max(t_max, s.distance);
    }
    HQC_REQUIRE(std::log10(t_max / t_min) >= 1.5, ErrorKind::window_too_narrow,
                "trace window spans " + std::to_string(std::log10(t_max / t_min))
                    + " decades, need 1.5");

    BasepointHolderCert cert;
    cert.patch = std::move(patch);
    cert.sup_norm = sup_norm;
    cert.base_value = base_value;
    cert.samples = samples.size();

    std::vector<double> ts, ds;
    for (auto const& s : samples)
    {
        if (s.difference > 0)
        {
            ts.push_back(s.distance);
            ds.push_back(s.difference);
        }
    }
    cert.fit.t_min = t_min;
    cert.fit.t_max = t_max;
    if (ts.size() >= 2 && std::log10(*std::max_element(ts.begin(), ts.end())
                                      / *std::min_element(ts.begin(), ts.end()))
                              > 0)
    {
        cert.fit = fit_power_law(ts, ds);
        cert.fit.t_min = t_min;
        cert.fit.t_max = t_max;
    }
    else
    {
        // identically zero trace: every exponent holds with M = 0
        cert.fit.exponent = 1;
        cert.fit.r2 = 1;
    }
    cert.exponent = exponent ? *exponent : std::max(0.0, cert.fit.exponent);
    for (auto const& s : samples)
        cert.constant = std::max(cert.constant,
                                 s.difference / std::pow(s.distance, cert.exponent));
    return cert;
}

std::array<Vec2, 2> boundary_points_at(geometry::PlanarDomain const& domain,
                                       Vec2 const& x0,
                                       double d)
{
    HQC_REQUIRE(d > 0, ErrorKind::invalid_argument, "distance must be positive");
    if (domain.is_half_plane())
        return {x0 + Vec2(d, 0), x0 - Vec2(d, 0)};
    HQC_REQUIRE(d < 0.5 * domain.diameter(), ErrorKind::invalid_argument,
                "distance exceeds half the domain diameter");
    double s0 = domain.parameter_of(x0);
    double len_step = 1.0 / 4096;
    std::array<Vec2, 2> out;
    for (int side = 0; side < 2; ++side)
    {
        double sign = side == 0 ? 1.0 : -1.0;
        auto dist = [&](double u) { return (domain.boundary_point(s0 + sign * u) - x0).norm(); };
        double lo = 0, hi = len_step;
        while (dist(hi) < d)
        {
            lo = hi;
            hi += len_step;
            HQC_REQUIRE(hi < 0.5, ErrorKind::invalid_argument,
                        "no boundary point at the requested distance");
        }
        for (int k = 0; k < 60; ++k)
        {
            double mid = 0.5 * (lo + hi);
            (dist(mid) < d ? lo : hi) = mid;
        }
        out[side] = domain.boundary_point(s0 + sign * 0.5 * (lo + hi));
    }
    return out;
}

std::vector<TraceSample> sample_trace(geometry::PlanarDomain const& domain,
                                      Vec2 const& x0,
                                      std::function<double(Vec2 const&)> const& difference,
                                      TraceWindow const& window)
{
    HQC_REQUIRE(window.t_min > 0 && window.t_max > window.t_min && window.per_side >= 2,
                ErrorKind::invalid_argument, "bad trace window");
    std::vector<TraceSample> out;
    for (double d : geometric_grid(window.t_min, window.t_max, window.per_side))
    {
        for (auto const& xi : boundary_points_at(domain, x0, d))
            out.push_back({(xi - x0).norm(), difference(xi)});
    }
    return out;
}

}  // namespace hqclab::regularity
