#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "hqclab/core/types.hpp"
#include "hqclab/geometry/region.hpp"

namespace hqclab::harmonic
{
enum class Backend
{
    closed_form,
    poisson_disk,
    walk_on_spheres,
    grid,
};

std::string to_string(Backend b);

struct SolverParams
{
    double eps_shell = 1e-4;        //!< walk absorption distance
    std::size_t max_steps = 100000;  //!< per-walk step cap
    std::size_t n_walks = 10000;
    std::uint64_t seed = 1;
    double grid_h = 1.0 / 128;
    std::size_t threads = 0;  //!< 0: default worker count

    //! Throws InvalidArgument on eps_shell <= 0, n_walks == 0 or grid_h <= 0.
    void validate() const;
};

//! eps_shell default: 1e-4 times the region diameter (or its bounding box).
double default_eps_shell(geometry::Region const& region);

using BoundaryData = std::function<double(geometry::BoundaryHit const&)>;

//---------------------------------------------------------------------------//
/*!
 * Harmonic function on a region, evaluated by one of several backends.
 */
class HarmonicField
{
  public:
    virtual ~HarmonicField() = default;

    virtual Backend backend() const = 0;
    virtual geometry::Region const& region() const = 0;
    virtual Estimate value(Vec2 const& x) const = 0;

    //! Analytic gradient, when the backend has one.
    virtual std::optional<Vec2> exact_gradient(Vec2 const&) const { return std::nullopt; }

    //! u(a) - u(b) with an error bar; Monte Carlo backends correlate the two
    //! evaluations by reusing walk streams.
    virtual Estimate difference(Vec2 const& a, Vec2 const& b) const;

    //! Smallest depth at which finite differences are trustworthy.
    virtual double step_floor() const { return 0.0; }

    virtual std::string describe() const = 0;
};

using FieldPtr = std::shared_ptr<HarmonicField const>;

struct GradientEstimate
{
    Vec2 gradient = Vec2::Zero();
    Vec2 std_error = Vec2::Zero();
    double step = 0;
    //! Central-difference value (always computed).
    Vec2 finite_difference = Vec2::Zero();
    bool exact = false;
};

//! Gradient at an interior point. Uses the analytic gradient when available,
//! otherwise central differences at h = delta(x) / 8 (or `step`). Throws
//! StepTooLarge when h >= delta(x)/2 or delta(x) is below the backend floor.
GradientEstimate gradient_estimate(HarmonicField const& field,
                                   Vec2 const& x,
                                   std::optional<double> step = std::nullopt);

//---------------------------------------------------------------------------//
//! Closed-form harmonic function with an exact gradient.
class ClosedFormField final : public HarmonicField
{
  public:
    using ValueFn = std::function<double(Vec2 const&)>;
    using GradFn = std::function<Vec2(Vec2 const&)>;

    ClosedFormField(std::shared_ptr<geometry::Region const> region,
                    ValueFn value,
                    GradFn gradient,
                    std::string name);

    Backend backend() const override { return Backend::closed_form; }
    geometry::Region const& region() const override { return *region_; }
    Estimate value(Vec2 const& x) const override { return {value_(x), 0.0}; }
    std::optional<Vec2> exact_gradient(Vec2 const& x) const override { return gradient_(x); }
    std::string describe() const override { return name_; }

    double operator()(Vec2 const& x) const { return value_(x); }

  private:
    std::shared_ptr<geometry::Region const> region_;
    ValueFn value_;
    GradFn gradient_;
    std::string name_;
};

//! u = a.x + c
std::shared_ptr<ClosedFormField> linear_field(std::shared_ptr<geometry::Region const> region,
                                              Vec2 const& a,
                                              double c = 0.0);
//! u = r^mu cos(mu theta) about the origin, theta = atan2(y, x); harmonic on
//! the upper half-plane.
std::shared_ptr<ClosedFormField> polar_power_field(std::shared_ptr<geometry::Region const> region,
                                                   double mu);
//! u = x^2 - y^2
std::shared_ptr<ClosedFormField> saddle_field(std::shared_ptr<geometry::Region const> region);
std::shared_ptr<ClosedFormField> constant_field(std::shared_ptr<geometry::Region const> region,
                                                double c);

}  // namespace hqclab::harmonic
