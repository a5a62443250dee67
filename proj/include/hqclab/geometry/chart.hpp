#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "hqclab/geometry/domain.hpp"

namespace hqclab::geometry
{
//---------------------------------------------------------------------------//
/*!
 * Boundary flattened into a graph over its tangent line at q.
 *
 * T_q(z) = R_q (z - q) sends q to the origin, the tangent to e1 and the
 * inward normal to e2. Near the origin the image of the boundary is the graph
 * y2 = Phi(y1) with Phi(0) = Phi'(0) = 0 and
 *   |Phi'(y)| <= C |y|^alpha,  |Phi(y)| <= C |y|^{1+alpha}  for |y| < radius.
 */
class GraphChart
{
  public:
    Vec2 const& base_point() const { return base_; }
    Mat2 const& rotation() const { return rotation_; }
    double radius() const { return radius_; }
    double constant() const { return constant_; }
    double alpha() const { return alpha_; }
    //! Largest radius at which the boundary is still a single graph.
    double max_radius() const { return max_radius_; }

    Vec2 to_chart(Vec2 const& z) const { return rotation_ * (z - base_); }
    Vec2 from_chart(Vec2 const& y) const { return base_ + rotation_.transpose() * y; }

    //! Phi and Phi' on |y| < radius.
    double graph(double y) const;
    double slope(double y) const;

    //! Boundary parameter of the graph point above y.
    double parameter_at(double y) const;

  private:
    friend GraphChart flatten_chart(PlanarDomain const&, Vec2 const&,
                                    std::optional<double>, std::optional<double>);

    PlanarDomain domain_ = PlanarDomain::half_plane();
    Vec2 base_ = Vec2::Zero();
    Mat2 rotation_ = Mat2::Identity();
    double base_parameter_ = 0;
    double lo_parameter_ = 0;  // graph branch is s in [lo, hi] (unwrapped)
    double hi_parameter_ = 0;
    double radius_ = 0;
    double max_radius_ = 0;
    double constant_ = 0;
    double alpha_ = 1;
};

//! Flatten the boundary at q. `alpha` defaults to the curve's Holder exponent
//! and `radius` to half the largest graph radius (capped at half the
//! tangential extent of the branch); C is measured on samples.
//! Throws RadiusTooLarge if the requested radius exceeds the graph radius.
GraphChart flatten_chart(PlanarDomain const& domain,
                         Vec2 const& q,
                         std::optional<double> radius = std::nullopt,
                         std::optional<double> alpha = std::nullopt);

}  // namespace hqclab::geometry
