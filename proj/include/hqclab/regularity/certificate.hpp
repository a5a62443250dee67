#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hqclab/core/fit.hpp"
#include "hqclab/geometry/patch.hpp"

namespace hqclab::regularity
{
//---------------------------------------------------------------------------//
/*!
 * Boundary Hoelder bound at a basepoint:
 *   |u(xi) - u(x0)| <= M |xi - x0|^mu on Gamma,  |u| <= A on the patch.
 */
struct BasepointHolderCert
{
    std::shared_ptr<geometry::BoundaryPatch const> patch;
    double base_value = 0;  //!< u(x0)
    double exponent = 0;    //!< mu
    double constant = 0;    //!< M
    double sup_norm = 0;    //!< A
    ExponentFit fit;        //!< trace fit (window in t_min, t_max)
    std::size_t samples = 0;

    Vec2 const& basepoint() const { return patch->center(); }
    double radius() const { return patch->radius(); }
    //! M + A / r0^mu
    double prefactor() const;
    //! M r0^(mu-1) + A / r0
    double uniform_prefactor() const;
};

struct TraceSample
{
    double distance = 0;    //!< |xi - x0|
    double difference = 0;  //!< |u(xi) - u(x0)|
};

struct TraceWindow
{
    double t_min = 1e-3;
    double t_max = 1e-1;
    std::size_t per_side = 32;  //!< geometric distances on each side of x0
};

//! Fit mu by log-log least squares (clipped below at 0) and take M as the
//! largest quotient, so the bound holds on every sample. With `exponent` set
//! the fit is reported but M is computed for the given exponent.
//! Throws InvalidArgument below 64 samples, NonFiniteTrace, and
//! WindowTooNarrow under 1.5 decades.
BasepointHolderCert trace_holder_fit(std::span<TraceSample const> samples,
                                     std::shared_ptr<geometry::BoundaryPatch const> patch,
                                     double sup_norm,
                                     double base_value = 0,
                                     std::optional<double> exponent = std::nullopt);

//! Samples xi -> difference(xi) = |u(xi) - u(x0)| on the boundary at the
//! window distances, both sides of x0.
std::vector<TraceSample> sample_trace(geometry::PlanarDomain const& domain,
                                      Vec2 const& x0,
                                      std::function<double(Vec2 const&)> const& difference,
                                      TraceWindow const& window);

//! The two boundary points at chordal distance d from x0 (one per side).
std::array<Vec2, 2> boundary_points_at(geometry::PlanarDomain const& domain,
                                       Vec2 const& x0,
                                       double d);

}  // namespace hqclab::regularity
