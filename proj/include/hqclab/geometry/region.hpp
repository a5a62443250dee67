#pragma once

#include <string>

#include "hqclab/core/types.hpp"

namespace hqclab::geometry
{
//! Which piece of a region boundary a point belongs to. Whole domains report
//! `boundary`; patches split their boundary into the arc Gamma of the domain
//! boundary and the spherical cap Sigma.
enum class BoundaryPart
{
    boundary,
    gamma,
    sigma,
};

struct BoundaryHit
{
    Vec2 point;
    BoundaryPart part = BoundaryPart::boundary;
};

struct BoundingBox
{
    Vec2 lo;
    Vec2 hi;

    bool bounded() const { return lo.allFinite() && hi.allFinite(); }
};

//---------------------------------------------------------------------------//
/*!
 * Open planar region as seen by the harmonic solvers.
 *
 * `distance` only needs to be a lower bound on the distance to the region
 * boundary that becomes exact as the boundary is approached; walk-on-spheres
 * uses it as the jump radius.
 */
class Region
{
  public:
    virtual ~Region() = default;

    virtual bool contains(Vec2 const& x) const = 0;
    virtual double distance(Vec2 const& x) const = 0;
    virtual BoundaryHit project(Vec2 const& x) const = 0;
    virtual BoundingBox bounds() const = 0;
    virtual std::string describe() const = 0;
};

}  // namespace hqclab::geometry
