#include "hqclab/regularity/lemmas.hpp"

#include <algorithm>
#include <cmath>

#include "hqclab/core/error.hpp"
#include "hqclab/core/parallel.hpp"

namespace hqclab::regularity
{
namespace
{
void check_grid(geometry::BoundaryPatch const& patch,
                std::span<double const> t_grid,
                bool need_window)
{
    HQC_REQUIRE(t_grid.size() >= 2, ErrorKind::invalid_argument, "t grid needs two points");
    double limit = patch.collar_fraction() * patch.radius();
    for (double t : t_grid)
    {
        HQC_REQUIRE(t > 0 && t < limit, ErrorKind::invalid_argument,
                    "t = " + std::to_string(t) + " outside (0, c r0) = (0, "
                        + std::to_string(limit) + ")");
    }
    if (need_window)
    {
        auto [lo, hi] = std::minmax_element(t_grid.begin(), t_grid.end());
        HQC_REQUIRE(std::log10(*hi / *lo) >= 1.5, ErrorKind::window_too_narrow,
                    "t window spans fewer than 1.5 decades");
    }
}

// Workers over t only for deterministic backends; walk batches run their
// own workers.
std::size_t outer_threads(harmonic::HarmonicField const& field)
{
    return field.backend() == harmonic::Backend::walk_on_spheres ? 1 : 0;
}

ExponentFit fit_positive(std::span<double const> t, std::span<double const> y, bool& all_zero)
{
    std::vector<double> tp, yp;
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        if (y[i] > 0)
        {
            tp.push_back(t[i]);
            yp.push_back(y[i]);
        }
    }
    all_zero = tp.empty();
    ExponentFit fit;
    if (tp.size() >= 2)
        fit = fit_power_law(tp, yp);
    fit.t_min = *std::min_element(t.begin(), t.end());
    fit.t_max = *std::max_element(t.begin(), t.end());
    return fit;
}

double safe_ratio(double num, double den)
{
    if (num == 0)
        return 0;
    return den > 0 ? num / den : INFINITY;
}
}  // namespace

TentReport tent_check(BasepointHolderCert const& cert,
                      harmonic::HarmonicField const& field,
                      std::span<double const> t_grid,
                      TentOptions const& options)
{
    HQC_REQUIRE(cert.exponent > 0, ErrorKind::invalid_argument, "tent check needs mu > 0");
    HQC_REQUIRE(options.rings >= 1 && 1 + options.rings * options.angles >= 32,
                ErrorKind::invalid_argument, "tent ball needs at least 32 samples");
    auto const& patch = *cert.patch;
    check_grid(patch, t_grid, false);
    auto const& region = field.region();

    TentReport report;
    report.in_scope = cert.exponent < 1;
    report.rows.resize(t_grid.size());
    parallel_for(
        t_grid.size(),
        [&](std::size_t i) {
            double t = t_grid[i];
            Vec2 x = patch.normal_point(t);
            TentRow row{t, 0, 0, 0};
            auto visit = [&](Vec2 const& y) {
                if (!region.contains(y))
                    return;
                row.sup = std::max(row.sup, std::abs(field.value(y).value - cert.base_value));
                ++row.samples;
            };
            visit(x);
            for (std::size_t r = 1; r <= options.rings; ++r)
            {
                double rad = 0.5 * t * static_cast<double>(r) / options.rings;
                for (std::size_t a = 0; a < options.angles; ++a)
                {
                    double phi = two_pi * static_cast<double>(a) / options.angles;
                    visit(x + rad * Vec2(std::cos(phi), std::sin(phi)));
                }
            }
            row.ratio = row.sup / std::pow(t, cert.exponent);
            report.rows[i] = row;
        },
        outer_threads(field));

    std::vector<double> ts, sups;
    for (auto const& row : report.rows)
    {
        ts.push_back(row.t);
        sups.push_back(row.sup);
        report.max_ratio = std::max(report.max_ratio, row.ratio);
    }
    report.fit = fit_positive(ts, sups, report.zero_profile);
    report.c_hat = safe_ratio(report.max_ratio, cert.prefactor());
    report.passed = report.zero_profile
                    || report.fit.exponent >= cert.exponent - kExponentSlack;
    return report;
}

std::vector<GradientRow> normal_gradient_profile(geometry::BoundaryPatch const& patch,
                                                 harmonic::HarmonicField const& field,
                                                 std::span<double const> t_grid)
{
    std::vector<GradientRow> rows(t_grid.size());
    parallel_for(
        t_grid.size(),
        [&](std::size_t i) {
            auto g = harmonic::gradient_estimate(field, patch.normal_point(t_grid[i]));
            rows[i] = {t_grid[i], g.gradient.norm(), g.std_error.norm()};
        },
        outer_threads(field));
    return rows;
}

namespace
{
GradientProfile summarize(std::vector<GradientRow> rows, double target)
{
    GradientProfile p;
    p.rows = std::move(rows);
    p.target = target;
    std::vector<double> ts, ns;
    for (auto const& r : p.rows)
    {
        ts.push_back(r.t);
        ns.push_back(r.norm);
        p.max_norm = std::max(p.max_norm, r.norm);
    }
    p.fit = fit_positive(ts, ns, p.zero_profile);
    p.passed = p.zero_profile || p.fit.exponent >= target - kExponentSlack;
    return p;
}
}  // namespace

GradientProfile gradient_decay_check(BasepointHolderCert const& cert,
                                     harmonic::HarmonicField const& field,
                                     std::span<double const> t_grid)
{
    HQC_REQUIRE(cert.exponent > 0, ErrorKind::invalid_argument,
                "gradient decay needs mu > 0");
    check_grid(*cert.patch, t_grid, true);
    double mu = cert.exponent;
    auto p = summarize(normal_gradient_profile(*cert.patch, field, t_grid), mu - 1);
    p.in_scope = mu < 1;
    double worst = 0;
    for (auto const& r : p.rows)
        worst = std::max(worst, r.norm * std::pow(r.t, 1 - mu));
    p.c_hat = safe_ratio(worst, cert.prefactor());
    return p;
}

GradientProfile uniform_gradient_check(BasepointHolderCert const& cert,
                                       harmonic::HarmonicField const& field,
                                       std::span<double const> t_grid)
{
    HQC_REQUIRE(cert.exponent > 1, ErrorKind::invalid_argument,
                "uniform gradient bound needs mu > 1");
    check_grid(*cert.patch, t_grid, false);
    auto p = summarize(normal_gradient_profile(*cert.patch, field, t_grid), 0.0);
    p.c_hat = safe_ratio(p.max_norm, cert.uniform_prefactor());
    return p;
}

}  // namespace hqclab::regularity
