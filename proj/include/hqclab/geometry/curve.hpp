#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hqclab/core/types.hpp"

namespace hqclab::geometry
{
//---------------------------------------------------------------------------//
/*!
 * Closed C^{1,alpha} Jordan curve, star-shaped about a center.
 *
 * The curve is p(s) = c + r(theta) (cos theta, sin theta) with theta = 2 pi s,
 * s in [0, 1), traversed counterclockwise so the interior lies to the left.
 * Every catalog domain (disks, ellipses, Fourier-perturbed disks and disks
 * with a C^{1,alpha} bump) fits this form.
 */
class BoundaryCurve
{
  public:
    //! Radial function and its first two derivatives in theta.
    struct Radial
    {
        std::function<double(double)> r;
        std::function<double(double)> dr;
        std::function<double(double)> ddr;
    };

    static BoundaryCurve circle(Vec2 const& center, double radius);
    static BoundaryCurve ellipse(double a, double b);
    //! r(theta) = 1 + sum_k coeffs[k-1] cos(k theta)
    static BoundaryCurve fourier(std::vector<double> coeffs);
    //! Unit circle with a |phi|^{1+alpha} chi(phi/width) radial bump at the
    //! given angle; C^{1,alpha} but not C^2 there.
    static BoundaryCurve bump(double alpha,
                              double amplitude,
                              double width,
                              double angle = 0.0);
    static BoundaryCurve from_radial(std::string name,
                                     Vec2 const& center,
                                     Radial radial,
                                     double holder_alpha,
                                     std::size_t resolution = 1024);

    Vec2 point(double s) const;
    Vec2 derivative(double s) const;
    Vec2 second_derivative(double s) const;
    Vec2 unit_tangent(double s) const;
    //! Left normal of the counterclockwise tangent.
    Vec2 inward_normal(double s) const;

    //! Parameter of the boundary ray through x (angle about the center).
    double parameter_of(Vec2 const& x) const;
    double radius_at(double theta) const;
    //! Strict interior test.
    bool contains(Vec2 const& x) const;
    //! Signed radial gap r(theta) - |x - c| (positive inside).
    double radial_gap(Vec2 const& x) const;

    Vec2 const& center() const;
    bool is_circle() const;
    double circle_radius() const;
    std::string const& name() const;

    double holder_alpha() const;
    //! Measured sup of |T(s) - T(s')| / |s - s'|^alpha in arc length.
    double holder_const() const;
    std::size_t resolution() const;
    double length() const;
    double diameter() const;

    //! 256 uniformly spaced samples used to seed projections.
    std::span<Vec2 const> coarse_samples() const;

    //! Sampled invariant checks: injectivity (no polyline self-crossing),
    //! regularity, and the Holder bound with relative tolerance `tol`.
    //! Throws InvalidCurve on violation.
    void validate(double tol = 1e-6) const;

  private:
    struct Impl;
    explicit BoundaryCurve(std::shared_ptr<Impl const> impl);
    std::shared_ptr<Impl const> impl_;
};

//! Periodic distance between two curve parameters.
double parameter_gap(double s, double t);
//! Wrap a parameter into [0, 1).
double wrap_parameter(double s);

}  // namespace hqclab::geometry
