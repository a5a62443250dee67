#include "hqclab/harmonic/walk.hpp"

#include <cmath>
#include <numeric>

#include "hqclab/core/error.hpp"
#include "hqclab/core/parallel.hpp"
#include "hqclab/core/rng.hpp"

namespace hqclab::harmonic
{
WalkExit walk_on_spheres(geometry::Region const& region,
                         Vec2 const& x,
                         SolverParams const& params,
                         std::uint64_t stream)
{
    CounterRng rng(params.seed, stream);
    Vec2 p = x;
    WalkExit out;
    for (std::size_t step = 0; step < params.max_steps; ++step)
    {
        double d = region.distance(p);
        if (d < params.eps_shell)
        {
            out.hit = region.project(p);
            out.steps = static_cast<std::uint32_t>(step);
            return out;
        }
        double a = two_pi * rng.uniform();
        p += d * Vec2{std::cos(a), std::sin(a)};
    }
    out.hit = region.project(p);
    out.steps = static_cast<std::uint32_t>(params.max_steps);
    out.capped = true;
    return out;
}

WalkBatch run_walks(geometry::Region const& region,
                    Vec2 const& x,
                    SolverParams const& params,
                    std::uint64_t stream_offset)
{
    params.validate();
    HQC_REQUIRE(region.contains(x), ErrorKind::invalid_argument,
                "walk start is outside the region");
    WalkBatch batch;
    batch.exits.resize(params.n_walks);
    parallel_for(
        params.n_walks,
        [&](std::size_t i) {
            batch.exits[i] = walk_on_spheres(region, x, params, stream_offset + i);
        },
        params.threads);
    for (auto const& e : batch.exits)
        batch.capped += e.capped ? 1 : 0;
    HQC_REQUIRE(batch.capped * 100 <= batch.exits.size(), ErrorKind::max_steps_exceeded,
                std::to_string(batch.capped) + " of " + std::to_string(batch.exits.size())
                    + " walks reached the step cap");
    return batch;
}

Estimate sample_mean(std::vector<double> const& samples)
{
    HQC_REQUIRE(!samples.empty(), ErrorKind::invalid_argument, "no samples");
    double n = static_cast<double>(samples.size());
    double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    if (samples.size() < 2)
        return {mean, 0.0};
    double ss = 0;
    for (double v : samples)
        ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1) / n)};
}

//---------------------------------------------------------------------------//
WalkOnSpheresField::WalkOnSpheresField(std::shared_ptr<geometry::Region const> region,
                                       BoundaryData data,
                                       SolverParams params,
                                       std::string name)
    : region_(std::move(region)), data_(std::move(data)), params_(params), name_(std::move(name))
{
    HQC_REQUIRE(region_ && data_, ErrorKind::invalid_argument,
                "walk-on-spheres field needs a region and boundary data");
    params_.validate();
}

std::vector<double> WalkOnSpheresField::samples(Vec2 const& x) const
{
    auto batch = run_walks(*region_, x, params_);
    std::vector<double> out(batch.exits.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = data_(batch.exits[i].hit);
    return out;
}

Estimate WalkOnSpheresField::value(Vec2 const& x) const
{
    return sample_mean(samples(x));
}

Estimate WalkOnSpheresField::difference(Vec2 const& a, Vec2 const& b) const
{
    // Same streams at both points: the paired differences have much smaller
    // variance than independent evaluations.
    auto sa = samples(a);
    auto sb = samples(b);
    for (std::size_t i = 0; i < sa.size(); ++i)
        sa[i] -= sb[i];
    return sample_mean(sa);
}

}  // namespace hqclab::harmonic
