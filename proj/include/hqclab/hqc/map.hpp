#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hqclab/geometry/domain.hpp"
#include "hqclab/harmonic/field.hpp"
#include "hqclab/harmonic/poisson.hpp"
#include "hqclab/hqc/distortion.hpp"

namespace hqclab::hqc
{
struct MapTrace
{
    Vec2 value = Vec2::Zero();
    double tolerance = 0;
};

//---------------------------------------------------------------------------//
/*!
 * Planar map with harmonic components on a source region.
 *
 * Closed-form maps (affine) are exact everywhere including the boundary;
 * Poisson-extension maps live on the unit disk and recover boundary values by
 * radial extrapolation.
 */
class HarmonicMap
{
  public:
    HarmonicMap(harmonic::FieldPtr u1,
                harmonic::FieldPtr u2,
                std::string name,
                std::optional<geometry::PlanarDomain> target = std::nullopt);

    harmonic::HarmonicField const& component(int i) const { return i == 0 ? *u1_ : *u2_; }
    geometry::Region const& source() const { return u1_->region(); }
    std::optional<geometry::PlanarDomain> const& target() const { return target_; }
    std::string const& name() const { return name_; }

    Vec2 operator()(Vec2 const& x) const;
    //! Boundary value at a source boundary point.
    MapTrace trace(Vec2 const& xi) const;

    //! Boundary samples when built by Poisson extension.
    std::vector<Vec2> const& boundary_samples() const { return samples_; }

  private:
    friend HarmonicMap poisson_extension(std::vector<Vec2> samples,
                                         std::optional<geometry::PlanarDomain> target,
                                         std::string name);
    harmonic::FieldPtr u1_;
    harmonic::FieldPtr u2_;
    std::string name_;
    std::optional<geometry::PlanarDomain> target_;
    std::vector<Vec2> samples_;
};

//! x -> A x + b on the region; exact differential.
HarmonicMap affine_map(std::shared_ptr<geometry::Region const> region,
                       Mat2 const& a,
                       Vec2 const& b = Vec2::Zero(),
                       std::optional<geometry::PlanarDomain> target = std::nullopt,
                       std::string name = "affine");

//! z + c conj(z), harmonic and K-quasiconformal for |c| < 1.
HarmonicMap conformal_plus_anti(std::shared_ptr<geometry::Region const> region,
                                std::complex<double> c);

//---------------------------------------------------------------------------//
//! Boundary homeomorphism of the unit circle onto a target curve.
struct BoundaryMapSpec
{
    enum class Kind
    {
        identity,
        twist,      //!< theta -> exp(i (theta + epsilon sin theta))
        fourier,    //!< theta -> sum c_k exp(i k theta)
        tabulated,  //!< samples at theta_j = 2 pi j / N
    };
    Kind kind = Kind::identity;
    double epsilon = 0;
    std::vector<std::pair<int, std::complex<double>>> terms;
    std::vector<Vec2> table;
    std::size_t nodes = 2048;

    std::string describe() const;
    //! Samples at the quadrature nodes.
    std::vector<Vec2> sample() const;
};

//! Throws NotInjective when the sampled curve self-intersects or winds
//! clockwise, and QuadratureUnderResolved with fewer than 512 nodes or a
//! coefficient tail above 1e-6 of the largest mode.
HarmonicMap poisson_extension(std::vector<Vec2> samples,
                              std::optional<geometry::PlanarDomain> target = std::nullopt,
                              std::string name = "poisson");
HarmonicMap poisson_extension(BoundaryMapSpec const& spec,
                              std::optional<geometry::PlanarDomain> target = std::nullopt);

//---------------------------------------------------------------------------//
//! Differential from component gradient estimates.
DifferentialSample differential(HarmonicMap const& map, Vec2 const& x);

struct QcEstimate
{
    double k = 1;
    Vec2 worst = Vec2::Zero();
    std::vector<DifferentialSample> samples;
};

//! Jacobians at or below this are treated as not sense-preserving.
inline constexpr double kJacobianFloor = 1e-10;

//! K = sup |Df|^2 / J over the points. Throws JacobianNonPositive naming the
//! first point with J <= 1e-10.
QcEstimate qc_constant(HarmonicMap const& map, std::vector<Vec2> const& points);

//! Interior points of an n x n lattice over the region's bounding box with
//! depth at least `min_depth`.
std::vector<Vec2> lattice_points(geometry::Region const& region, int n, double min_depth);

}  // namespace hqclab::hqc
