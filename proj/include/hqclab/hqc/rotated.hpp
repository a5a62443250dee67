#pragma once

#include <optional>
#include <vector>

#include "hqclab/geometry/chart.hpp"
#include "hqclab/hqc/map.hpp"

namespace hqclab::hqc
{
struct BoundarySample
{
    Vec2 eta = Vec2::Zero();     //!< source boundary point
    Vec2 image = Vec2::Zero();   //!< F^(q)(eta) in chart coordinates
    double residual = 0;         //!< |F_n - Phi(F_tilde)|
    double tolerance = 0;        //!< trace tolerance
};

//---------------------------------------------------------------------------//
/*!
 * f^(q) = T_q o f for the chart of the target boundary at q = f(xi).
 *
 * Component 0 is the tangential coordinate, component 1 the normal one.
 */
class RotatedMap
{
  public:
    HarmonicMap const& base() const { return *base_; }
    geometry::GraphChart const& chart() const { return chart_; }
    Vec2 const& xi() const { return xi_; }
    //! Source-boundary angles sampled around xi.
    std::vector<BoundarySample> const& samples() const { return samples_; }

    Vec2 operator()(Vec2 const& x) const { return chart_.to_chart((*base_)(x)); }
    Mat2 differential(Vec2 const& x) const;
    //! Trace in chart coordinates.
    MapTrace trace(Vec2 const& eta) const;
    //! |F_n(eta) - Phi(F_tilde(eta))|.
    double boundary_residual(Vec2 const& eta) const;
    double max_residual() const;

    //! f_n^(q) = e_2 . T_q(f) as a harmonic field on the source region.
    harmonic::FieldPtr normal_component() const;

  private:
    friend RotatedMap rotate_to_chart(std::shared_ptr<HarmonicMap const>, Vec2 const&,
                                      std::optional<double>, std::size_t,
                                      std::optional<double>);
    RotatedMap(std::shared_ptr<HarmonicMap const> base, geometry::GraphChart chart, Vec2 xi)
        : base_(std::move(base)), chart_(std::move(chart)), xi_(std::move(xi))
    {
    }
    std::shared_ptr<HarmonicMap const> base_;
    geometry::GraphChart chart_;
    Vec2 xi_;
    std::vector<BoundarySample> samples_;
};

/*!
 * Rotate the map into the target chart at q = f(xi), xi on the unit circle.
 *
 * `arc` is the half-angle of the source boundary window sampled around xi.
 * When unset the largest of pi/4, pi/8, ... whose images stay in the chart
 * ball is used; an explicit window whose images leave it throws
 * TraceOutsideChart. `alpha` overrides the chart exponent.
 */
RotatedMap rotate_to_chart(std::shared_ptr<HarmonicMap const> map,
                           Vec2 const& xi,
                           std::optional<double> arc = std::nullopt,
                           std::size_t samples = 512,
                           std::optional<double> alpha = std::nullopt);

}  // namespace hqclab::hqc
