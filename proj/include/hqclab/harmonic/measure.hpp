#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hqclab/core/fit.hpp"
#include "hqclab/geometry/patch.hpp"
#include "hqclab/harmonic/field.hpp"

namespace hqclab::harmonic
{
//---------------------------------------------------------------------------//
/*!
 * Boundary subset: points of one boundary part (or any part) whose distance
 * from `center` lies in [r_min, r_max) and whose angle about `center` lies in
 * the counterclockwise arc [angle_from, angle_from + angle_span).
 */
struct BoundaryTarget
{
    std::optional<geometry::BoundaryPart> part;
    Vec2 center = Vec2::Zero();
    double r_min = 0;
    double r_max = std::numeric_limits<double>::infinity();
    double angle_from = -pi;
    double angle_span = two_pi;

    bool contains(geometry::BoundaryHit const& hit) const;
    std::string describe() const;

    static BoundaryTarget whole();
    static BoundaryTarget of_part(geometry::BoundaryPart p);
    static BoundaryTarget arc(Vec2 const& center, double from, double span);
    static BoundaryTarget outside_ball(Vec2 const& center,
                                       double s,
                                       std::optional<geometry::BoundaryPart> part = std::nullopt);
};

struct MeasureEstimate
{
    double value = 0;
    double std_error = 0;
    std::size_t n_walks = 0;  //!< 0 for deterministic backends
};

/*!
 * Harmonic measure of a target seen from pole y.
 *
 * Backends: walk_on_spheres (exit frequency), grid (indicator Dirichlet
 * problem), closed_form (Poisson kernel; regions built on the upper
 * half-plane only). For a half-plane patch the closed form uses the
 * unbounded half-plane: Gamma is the segment inside the ball and the rest of
 * the line plays the role of Sigma.
 */
MeasureEstimate harmonic_measure(geometry::Region const& region,
                                 Vec2 const& y,
                                 BoundaryTarget const& target,
                                 SolverParams const& params,
                                 Backend backend = Backend::walk_on_spheres);

//! Several targets from one walk batch (walk_on_spheres only).
std::vector<MeasureEstimate> harmonic_measures(geometry::Region const& region,
                                               Vec2 const& y,
                                               std::span<BoundaryTarget const> targets,
                                               SolverParams const& params);

//---------------------------------------------------------------------------//
struct ProfilePoint
{
    double x = 0;  //!< height t or radius s
    MeasureEstimate measure;
};

struct LeakProfile
{
    std::vector<ProfilePoint> points;
    double slope = 0;  //!< through-origin least-squares C in omega ~ C t
    ExponentFit fit;   //!< log-log power law
    bool increasing = true;
    std::size_t outliers = 0;  //!< points above the fitted line by 5 sigma
    bool passed() const { return outliers == 0; }
};

/*!
 * Sigma-leak profile t -> omega^{x0 + t nu}(Sigma) on a patch.
 *
 * Outliers are judged with sigma_i^2 = std_error_i^2 + (0.05 omega_i)^2; the
 * relative term absorbs the curvature of an exact O(t) profile over a finite
 * window, which a straight line through the origin cannot follow.
 */
LeakProfile sigma_leak_profile(geometry::BoundaryPatch const& patch,
                               std::span<double const> t_grid,
                               SolverParams const& params,
                               Backend backend = Backend::walk_on_spheres);

struct TailProfile
{
    std::vector<ProfilePoint> points;
    double delta = 0;     //!< delta_D(y)
    double constant = 0;  //!< max F(s) s / delta
    bool monotone = true;
};

//! F_y(s) = omega^y(Gamma \ B(x0, s)). One walk batch serves every s.
TailProfile gamma_tail_profile(geometry::BoundaryPatch const& patch,
                               Vec2 const& y,
                               std::span<double const> s_grid,
                               SolverParams const& params,
                               Backend backend = Backend::walk_on_spheres);

struct LayerCakeOptions
{
    std::size_t s_points = 2000;       //!< log-spaced quadrature nodes
    double s_min_fraction = 1.0 / 64;  //!< s_min = fraction * delta_D(y)
};

struct LayerCakeResult
{
    Estimate direct;       //!< mean of |zeta - x0|^mu over Gamma exits
    Estimate quadrature;   //!< mu int s^(mu-1) F(s) ds on an independent batch
    Estimate gamma_measure;
    double delta = 0;
    double s_min = 0;
    double sigma = 0;  //!< combined one-sigma error of the difference
    bool agree = false;  //!< |direct - quadrature| <= 3 sigma
};

//! Throws QuadratureUnstable when fewer than 16 nodes lie below delta_D(y).
LayerCakeResult layer_cake_moment(geometry::BoundaryPatch const& patch,
                                  Vec2 const& y,
                                  double mu,
                                  SolverParams const& params,
                                  Backend backend = Backend::walk_on_spheres,
                                  LayerCakeOptions const& options = {});

}  // namespace hqclab::harmonic
