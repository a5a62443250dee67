#pragma once

#include <optional>
#include <vector>

#include "hqclab/geometry/domain.hpp"

namespace hqclab::geometry
{
//---------------------------------------------------------------------------//
/*!
 * Local patch Omega = D ∩ B(x0, r0) around a boundary point.
 *
 * Its boundary splits into Gamma (the part of the domain boundary inside the
 * ball) and Sigma (the part of the sphere inside the closed domain). The
 * collar fraction c keeps B(x0, 2 c r0) away from Sigma and the normal segment
 * of length 2 c r0 inside the uniqueness collar.
 */
class BoundaryPatch final : public Region
{
  public:
    PlanarDomain const& domain() const { return domain_; }
    Vec2 const& center() const { return center_; }
    double radius() const { return radius_; }
    double collar_fraction() const { return collar_; }
    Vec2 const& normal() const { return normal_; }
    std::vector<Vec2> const& gamma_samples() const { return gamma_; }
    std::vector<Vec2> const& sigma_samples() const { return sigma_; }

    //! Point x0 + t nu(x0) on the inward normal.
    Vec2 normal_point(double t) const { return center_ + t * normal_; }

    //!@{
    //! Region interface
    bool contains(Vec2 const& x) const override;
    double distance(Vec2 const& x) const override;
    BoundaryHit project(Vec2 const& x) const override;
    BoundingBox bounds() const override;
    std::string describe() const override;
    //!@}

    //! Classify a point of the patch boundary.
    BoundaryPart classify(Vec2 const& boundary_point) const;

    //! Whether B(x0, 2 c r0) misses every Sigma sample.
    bool separated(double c) const;

  private:
    friend BoundaryPatch build_patch(PlanarDomain const&, Vec2 const&, double,
                                     std::optional<double>);
    BoundaryPatch(PlanarDomain domain, Vec2 center, double radius);

    PlanarDomain domain_;
    Vec2 center_;
    double radius_;
    double collar_ = 0;
    Vec2 normal_;
    std::vector<Vec2> gamma_;
    std::vector<Vec2> sigma_;
};

//! Candidate collar fractions, tried from largest to smallest.
inline constexpr double kCollarCandidates[]
    = {0.45, 0.40, 0.35, 0.30, 0.25, 0.20, 0.15, 0.10, 0.05};

//! Build the patch at x0. With `collar` unset the largest candidate passing
//! the separation test is used; an explicit value that fails it, or a
//! disconnected patch, throws PatchDegenerate.
BoundaryPatch build_patch(PlanarDomain const& domain,
                          Vec2 const& x0,
                          double r0,
                          std::optional<double> collar = std::nullopt);

//! Unit half-disk: the half-plane patch at the origin with r0 = 1.
BoundaryPatch half_disk_patch(double r0 = 1.0);

}  // namespace hqclab::geometry
