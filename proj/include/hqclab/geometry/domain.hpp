#pragma once

#include <memory>
#include <optional>

#include "hqclab/geometry/curve.hpp"
#include "hqclab/geometry/region.hpp"

namespace hqclab::geometry
{
struct Projection
{
    Vec2 point;          //!< pi(x)
    double delta = 0;    //!< delta_D(x)
    double parameter = 0;  //!< boundary parameter of pi(x)
};

//---------------------------------------------------------------------------//
/*!
 * Planar C^{1,alpha} domain: either the interior of a BoundaryCurve or the
 * upper half-plane {y > 0}.
 *
 * Boundary parameters are the curve parameter s in [0, 1) for bounded
 * domains and the abscissa for the half-plane.
 */
class PlanarDomain final : public Region
{
  public:
    static PlanarDomain half_plane();
    static PlanarDomain bounded(BoundaryCurve curve);
    static PlanarDomain disk(double radius = 1.0, Vec2 const& center = Vec2::Zero());

    bool is_half_plane() const;
    BoundaryCurve const& boundary() const;

    //!@{
    //! Region interface
    bool contains(Vec2 const& x) const override;
    double distance(Vec2 const& x) const override;
    BoundaryHit project(Vec2 const& x) const override;
    BoundingBox bounds() const override;
    std::string describe() const override;
    //!@}

    //! Unique nearest boundary point. Throws NonUniqueProjection when two
    //! distinct roots of the orthogonality condition tie, and OutsideTubular
    //! when the point lies beyond the validated uniqueness radius.
    Projection nearest_point(Vec2 const& x) const;

    //! Global distance minimizer without the tubular checks.
    Projection closest(Vec2 const& x) const;

    //! Inward unit normal at a boundary point.
    Vec2 inward_normal(Vec2 const& xi) const;

    Vec2 boundary_point(double s) const;
    Vec2 boundary_derivative(double s) const;
    Vec2 normal_at(double s) const;
    //! d(nu)/ds along the boundary parametrization.
    Vec2 normal_derivative(double s) const;
    double parameter_of(Vec2 const& xi) const;

    //! Safety collar radius r_D (half of the validated uniqueness radius).
    double tubular_radius() const;
    //! Largest normal depth at which sampled collar points still project back
    //! to their foot point.
    double uniqueness_radius() const;
    double diameter() const;

    //! Check that projecting xi + r nu(xi) returns (xi, r) uniquely.
    bool collar_point_ok(double s, double r) const;

  private:
    struct Impl;
    explicit PlanarDomain(std::shared_ptr<Impl const> impl);
    std::shared_ptr<Impl const> impl_;
};

}  // namespace hqclab::geometry
