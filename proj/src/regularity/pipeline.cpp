#include "hqclab/regularity/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hqclab/core/error.hpp"
#include "hqclab/core/rng.hpp"
#include "hqclab/geometry/quasiconvex.hpp"
#include "hqclab/hqc/rotated.hpp"

namespace hqclab::regularity
{
std::vector<Vec2> circle_points(std::size_t n)
{
    std::vector<Vec2> out;
    for (std::size_t k = 0; k < n; ++k)
    {
        double a = two_pi * static_cast<double>(k) / static_cast<double>(n);
        out.emplace_back(std::cos(a), std::sin(a));
    }
    return out;
}

namespace
{
struct BoundaryWork
{
    Vec2 xi;
    std::vector<TraceSample> trace;
    double fitted = 0;
    std::shared_ptr<geometry::BoundaryPatch const> patch;
    std::vector<double> t_grid;
    std::optional<hqc::RotatedMap> rotated;
};

std::string describe_point(Vec2 const& x)
{
    std::ostringstream os;
    os << "(" << x.x() << ", " << x.y() << ")";
    return os.str();
}

[[noreturn]] void stage_failure(StageReport const& s, std::string const& why)
{
    std::ostringstream os;
    os << "stage " << s.m << " (beta = " << s.beta << ") " << s.check << " at xi = "
       << describe_point(s.xi) << ": " << why;
    throw Error(ErrorKind::stage_failure, os.str());
}

void require_exponent(StageReport const& s)
{
    if (!s.passed)
    {
        std::ostringstream os;
        os << "fitted exponent " << s.exponent << " below target " << s.target << " - "
           << kExponentSlack;
        stage_failure(s, os.str());
    }
}

// Lower beta0 until no beta_m (m >= 1) sits within 0.01 of 1, since the
// collar bound is undefined at the endpoint.
IterationTrace iterate_clear(double alpha, double beta0)
{
    for (;;)
    {
        auto trace = exponent_iteration(alpha, beta0);
        bool ok = true;
        for (std::size_t m = 1; m < trace.beta.size(); ++m)
            ok = ok && std::abs(trace.beta[m] - 1) >= 0.01;
        if (ok)
            return trace;
        beta0 -= 0.005;
        HQC_REQUIRE(beta0 > 0, ErrorKind::stage_failure, "no admissible seed exponent");
    }
}
}  // namespace

LipschitzReport lipschitz_pipeline(std::shared_ptr<hqc::HarmonicMap const> map,
                                   std::vector<Vec2> const& boundary_points,
                                   PipelineOptions const& options)
{
    HQC_REQUIRE(map, ErrorKind::invalid_argument, "pipeline needs a map");
    HQC_REQUIRE(map->target(), ErrorKind::invalid_argument, "pipeline needs a target domain");
    auto const* domain = dynamic_cast<geometry::PlanarDomain const*>(&map->source());
    HQC_REQUIRE(domain && !domain->is_half_plane(), ErrorKind::invalid_argument,
                "pipeline needs a map on a bounded planar domain");
    HQC_REQUIRE(!boundary_points.empty(), ErrorKind::invalid_argument,
                "pipeline needs boundary points");
    HQC_REQUIRE(options.alpha > 0 && options.alpha < 1, ErrorKind::invalid_argument,
                "alpha must be in (0, 1)");

    LipschitzReport report;
    report.seed_note = "seed exponent: smallest fitted trace exponent, capped at "
                       + std::to_string(options.beta_cap)
                       + "; it stands in for the nonconstructive boundary Holder exponent";

    // Trace fits and per-point geometry.
    std::vector<BoundaryWork> work;
    report.beta0_fitted = INFINITY;
    for (auto const& xi : boundary_points)
    {
        BoundaryWork w;
        w.xi = xi;
        Vec2 f_xi = map->trace(xi).value;
        w.trace = sample_trace(
            *domain, xi, [&](Vec2 const& eta) { return (map->trace(eta).value - f_xi).norm(); },
            options.trace_window);
        w.patch = std::make_shared<geometry::BoundaryPatch const>(
            geometry::build_patch(*domain, xi, options.patch_radius));
        auto cert = trace_holder_fit(w.trace, w.patch, 0.0);
        w.fitted = cert.fit.exponent;
        report.beta0_fitted = std::min(report.beta0_fitted, w.fitted);
        double t_max = 0.5 * w.patch->collar_fraction() * w.patch->radius();
        w.t_grid = geometric_grid(options.t_min, t_max, options.t_points);
        w.rotated.emplace(hqc::rotate_to_chart(map, xi, std::nullopt, 512, options.alpha));
        work.push_back(std::move(w));
    }

    report.beta0_seed = std::min(report.beta0_fitted, options.beta_cap);
    report.iteration = iterate_clear(options.alpha, report.beta0_seed);
    report.beta0_seed = report.iteration.beta0();
    auto const& beta = report.iteration.beta;
    std::size_t m0 = report.iteration.m0;

    // K over the interior lattice and every collar point.
    std::vector<Vec2> qc_points = hqc::lattice_points(*domain, 24, options.t_min);
    for (auto const& w : work)
    {
        for (double t : w.t_grid)
            qc_points.push_back(w.patch->normal_point(t));
    }
    report.k = hqc::qc_constant(*map, qc_points).k;

    for (std::size_t m = 0; m < m0; ++m)
    {
        double stage_constant = 0;
        std::vector<CollarProfile> profiles;
        for (auto& w : work)
        {
            auto cert = trace_holder_fit(w.trace, w.patch, 0.0, 0.0, beta[m]);
            auto imp = normal_trace_improvement(*w.rotated, cert);
            StageReport s{m + 1, imp.beta1, "normal-trace", w.xi, imp.beta1, imp.beta1,
                          imp.c1, imp.passed()};
            report.stages.push_back(s);
            if (!s.passed)
                stage_failure(s, std::to_string(imp.violations) + " sample violations");
            stage_constant = std::max(stage_constant, imp.c1);

            auto prof = collar_gradient_bound(*w.rotated, imp, w.patch, report.k, w.t_grid);
            s.check = beta[m + 1] < 1 ? "collar" : "uniform";
            s.exponent = prof.fit.exponent;
            s.target = prof.target;
            s.constant = prof.constant;
            s.passed = prof.passed;
            report.stages.push_back(s);
            if (prof.distortion_violations > 0)
                stage_failure(s, "distortion bound violated");
            require_exponent(s);
            profiles.push_back(std::move(prof));
        }
        report.iteration.constants.push_back(stage_constant);

        if (m + 1 < m0)
        {
            double c = 0;
            for (auto const& p : profiles)
                c = std::max(c, p.constant);
            for (auto const& w : work)
            {
                Vec2 eta = boundary_points_at(*domain, w.xi, options.path_rho)[0];
                auto path = path_holder_upgrade(*map, w.xi, eta, beta[m + 1], c);
                StageReport s{m + 1, beta[m + 1], "path", w.xi, beta[m + 1], beta[m + 1],
                              path.certified_constant, path.passed};
                report.stages.push_back(s);
                if (!s.passed)
                    stage_failure(s, "path integral exceeds the collar bound");
            }
        }
        else
        {
            report.final_profiles = std::move(profiles);
        }
    }

    // Globalization.
    for (std::size_t i = 0; i < work.size(); ++i)
    {
        for (auto const& row : report.final_profiles[i].rows)
            report.collar_bound = std::max(report.collar_bound, row.df_norm);
        report.delta_star = std::max(report.delta_star, work[i].t_grid.back());
    }
    for (auto const& x : hqc::lattice_points(*domain, options.interior_lattice,
                                             report.delta_star))
        report.interior_bound = std::max(report.interior_bound,
                                         hqc::differential(*map, x).sigma_max);
    report.sup_df = std::max(report.collar_bound, report.interior_bound);
    report.quasiconvexity
        = geometry::measure_quasiconvexity(*domain, options.quasiconvex_pairs, options.seed)
              .constant;
    report.lipschitz = report.quasiconvexity * report.sup_df;

    auto box = domain->bounds();
    CounterRng rng(options.seed, 0x9a1c5);
    auto draw = [&] {
        for (;;)
        {
            Vec2 x(box.lo.x() + (box.hi.x() - box.lo.x()) * rng.uniform(),
                   box.lo.y() + (box.hi.y() - box.lo.y()) * rng.uniform());
            if (domain->contains(x))
                return x;
        }
    };
    for (std::size_t p = 0; p < options.pairs; ++p)
    {
        Vec2 x = draw(), y = draw();
        double d = (x - y).norm();
        if (d > 0)
            report.direct_quotient
                = std::max(report.direct_quotient, ((*map)(x) - (*map)(y)).norm() / d);
    }
    report.cross_valid = report.direct_quotient <= report.lipschitz * 1.05;
    return report;
}

}  // namespace hqclab::regularity
