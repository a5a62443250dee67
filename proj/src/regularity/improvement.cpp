#include "hqclab/regularity/improvement.hpp"

#include <algorithm>
#include <cmath>

#include "hqclab/core/error.hpp"
#include "hqclab/hqc/distortion.hpp"
#include "hqclab/hqc/map.hpp"

namespace hqclab::regularity
{
ImprovedExponent improved_exponent(double alpha, double beta0, double c_omega, double c0)
{
    HQC_REQUIRE(alpha > 0 && alpha <= 1, ErrorKind::invalid_argument, "alpha must be in (0, 1]");
    HQC_REQUIRE(beta0 > 0, ErrorKind::invalid_argument, "beta0 must be positive");
    HQC_REQUIRE(c_omega >= 0 && c0 >= 0, ErrorKind::invalid_argument,
                "constants must be non-negative");
    return {(1 + alpha) * beta0, c_omega * std::pow(c0, 1 + alpha)};
}

NormalTraceCert normal_trace_improvement(hqc::RotatedMap const& rotated,
                                         BasepointHolderCert const& trace,
                                         NormalTraceOptions const& options)
{
    auto const& chart = rotated.chart();
    NormalTraceCert cert;
    cert.alpha = chart.alpha();
    cert.beta0 = trace.exponent;
    cert.c0 = trace.constant;
    cert.c_omega = chart.constant();
    auto imp = improved_exponent(cert.alpha, cert.beta0, cert.c_omega, cert.c0);
    cert.beta1 = imp.beta1;
    cert.c1 = imp.c1;

    double worst_tol = 0;
    for (auto const& s : rotated.samples())
    {
        cert.residual = std::max(cert.residual, s.residual);
        worst_tol = std::max(worst_tol, s.tolerance);
    }
    double limit = options.residual_tolerance + 10 * worst_tol;
    HQC_REQUIRE(cert.residual <= limit, ErrorKind::chart_residual_too_large,
                "chart residual " + std::to_string(cert.residual) + " exceeds "
                    + std::to_string(limit));

    Vec2 const& xi = rotated.xi();
    for (auto const& s : rotated.samples())
    {
        double d = (s.eta - xi).norm();
        if (d <= 0 || d > trace.fit.t_max)
            continue;
        ++cert.samples;
        double fn = std::abs(s.image.y());
        double scale = std::pow(d, cert.beta1);
        cert.max_quotient = std::max(cert.max_quotient, fn / scale);
        if (fn > cert.c1 * scale * (1 + options.tolerance) + 2 * s.tolerance)
            ++cert.violations;
    }
    return cert;
}

CollarProfile collar_gradient_bound(hqc::RotatedMap const& rotated,
                                    NormalTraceCert const& improvement,
                                    std::shared_ptr<geometry::BoundaryPatch const> patch,
                                    double k,
                                    std::span<double const> t_grid)
{
    double beta1 = improvement.beta1;
    HQC_REQUIRE(std::abs(beta1 - 1) >= 0.01, ErrorKind::endpoint_exponent,
                "beta1 = " + std::to_string(beta1) + " is within 0.01 of 1");
    HQC_REQUIRE(patch, ErrorKind::invalid_argument, "collar bound needs a source patch");

    CollarProfile out;
    out.beta1 = beta1;
    out.k = k;
    out.h = hqc::linear_distortion_bound(k, 2);

    auto fn = rotated.normal_component();
    BasepointHolderCert cert;
    cert.patch = patch;
    cert.exponent = beta1;
    cert.constant = improvement.c1;
    for (auto const& x : hqc::lattice_points(*patch, 16, 0.0))
        cert.sup_norm = std::max(cert.sup_norm, std::abs(fn->value(x).value));

    out.normal = beta1 < 1 ? gradient_decay_check(cert, *fn, t_grid)
                           : uniform_gradient_check(cert, *fn, t_grid);
    out.target = beta1 < 1 ? beta1 - 1 : 0.0;

    std::vector<double> ts, dfs;
    for (auto const& row : out.normal.rows)
    {
        auto d = hqc::differential(rotated.base(), patch->normal_point(row.t));
        CollarRow r{row.t, d.sigma_max, row.norm, out.h * row.norm};
        if (r.df_norm > r.bound * (1 + 1e-9) + 1e-12)
            ++out.distortion_violations;
        double weight = beta1 < 1 ? std::pow(row.t, 1 - beta1) : 1.0;
        out.constant = std::max(out.constant, r.df_norm * weight);
        ts.push_back(r.t);
        dfs.push_back(r.df_norm);
        out.rows.push_back(r);
    }
    out.fit = fit_power_law(ts, dfs);
    out.passed = out.fit.exponent >= out.target - kExponentSlack
                 && out.distortion_violations == 0;
    return out;
}

}  // namespace hqclab::regularity
