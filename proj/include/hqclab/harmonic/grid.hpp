#pragma once

#include <memory>
#include <vector>

#include "hqclab/geometry/region.hpp"
#include "hqclab/harmonic/field.hpp"

namespace hqclab::harmonic
{
//---------------------------------------------------------------------------//
/*!
 * Five-point Dirichlet solution on a uniform grid.
 *
 * Nodes sit at integer multiples of h. Arms that cross the boundary are
 * shortened to the crossing point (Shortley-Weller), so the scheme stays
 * second order on curved boundaries. Nodes outside the region carry the
 * boundary value at their nearest boundary point and only serve the bilinear
 * interpolation.
 */
struct GridSolution
{
    std::shared_ptr<geometry::Region const> region;
    double h = 0;
    long i0 = 0;  //!< index of the first column (x = i0 h)
    long j0 = 0;
    long nx = 0;
    long ny = 0;
    std::vector<double> values;     //!< row-major, nx * ny
    std::vector<char> unknown;      //!< 1 where the node was solved for
    std::size_t unknowns = 0;
    double residual = 0;            //!< max |h^2-scaled residual|
    double data_min = 0;
    double data_max = 0;

    Vec2 node(long i, long j) const { return {(i0 + i) * h, (j0 + j) * h}; }
    double at(long i, long j) const { return values[j * nx + i]; }
    //! Bilinear interpolation; x must lie inside the grid box.
    double interpolate(Vec2 const& x) const;
};

//! Throws GridTooCoarse when the region is less than 16 cells across and
//! SolverDiverged when the linear solve fails or leaves a residual above 1e-9.
GridSolution grid_solve(std::shared_ptr<geometry::Region const> region,
                        BoundaryData const& data,
                        double h);

class GridField final : public HarmonicField
{
  public:
    explicit GridField(GridSolution solution);

    Backend backend() const override { return Backend::grid; }
    geometry::Region const& region() const override { return *solution_.region; }
    Estimate value(Vec2 const& x) const override { return {solution_.interpolate(x), 0.0}; }
    double step_floor() const override { return 2 * solution_.h; }
    std::string describe() const override;

    GridSolution const& solution() const { return solution_; }

  private:
    GridSolution solution_;
};

}  // namespace hqclab::harmonic
