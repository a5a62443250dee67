#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hqclab/geometry/region.hpp"
#include "hqclab/harmonic/field.hpp"

namespace hqclab::harmonic
{
struct WalkExit
{
    geometry::BoundaryHit hit;
    std::uint32_t steps = 0;
    bool capped = false;
};

struct WalkBatch
{
    std::vector<WalkExit> exits;
    std::size_t capped = 0;

    double capped_fraction() const
    {
        return exits.empty() ? 0.0 : static_cast<double>(capped) / exits.size();
    }
};

//! One walk-on-spheres path from x, absorbed in the eps shell and snapped to
//! the nearest boundary point.
WalkExit walk_on_spheres(geometry::Region const& region,
                         Vec2 const& x,
                         SolverParams const& params,
                         std::uint64_t stream);

//! n_walks walks from x; walk i draws from stream (stream_offset + i) of the
//! run seed, so results are identical for any worker count. Throws
//! MaxStepsExceeded when more than 1% of the walks hit the step cap.
WalkBatch run_walks(geometry::Region const& region,
                    Vec2 const& x,
                    SolverParams const& params,
                    std::uint64_t stream_offset = 0);

//! Mean and standard error of per-walk samples.
Estimate sample_mean(std::vector<double> const& samples);

//---------------------------------------------------------------------------//
//! Dirichlet solution by walk-on-spheres.
class WalkOnSpheresField final : public HarmonicField
{
  public:
    WalkOnSpheresField(std::shared_ptr<geometry::Region const> region,
                       BoundaryData data,
                       SolverParams params,
                       std::string name = "walk_on_spheres");

    Backend backend() const override { return Backend::walk_on_spheres; }
    geometry::Region const& region() const override { return *region_; }
    Estimate value(Vec2 const& x) const override;
    Estimate difference(Vec2 const& a, Vec2 const& b) const override;
    double step_floor() const override { return 4 * params_.eps_shell; }
    std::string describe() const override { return name_; }

    SolverParams const& params() const { return params_; }
    BoundaryData const& data() const { return data_; }
    //! Per-walk boundary values at x.
    std::vector<double> samples(Vec2 const& x) const;

  private:
    std::shared_ptr<geometry::Region const> region_;
    BoundaryData data_;
    SolverParams params_;
    std::string name_;
};

}  // namespace hqclab::harmonic
