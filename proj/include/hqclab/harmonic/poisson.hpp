#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "hqclab/geometry/domain.hpp"
#include "hqclab/harmonic/field.hpp"

namespace hqclab::harmonic
{
//---------------------------------------------------------------------------//
/*!
 * Harmonic extension to the unit disk of periodic boundary samples.
 *
 * The samples g(2 pi k / N) define a trigonometric interpolant whose harmonic
 * extension is Re sum a_k z^k. Evaluation is exact for the interpolant all the
 * way to the circle, with no kernel singularity to manage.
 */
class PoissonDisk
{
  public:
    explicit PoissonDisk(std::vector<double> samples);
    static PoissonDisk from_function(std::function<double(double)> const& g, std::size_t nodes);

    std::size_t nodes() const { return samples_.size(); }
    std::vector<double> const& samples() const { return samples_; }
    //! Relative size of the highest retained coefficient; large values mean
    //! the samples under-resolve the data.
    double tail_ratio() const { return tail_ratio_; }

    double value(Vec2 const& z) const;
    Vec2 gradient(Vec2 const& z) const;

    struct Trace
    {
        double value = 0;
        double tolerance = 0;
    };
    //! Radial boundary limit by extrapolation from r = 1 - 1e-3 and 1 - 2e-3;
    //! the tolerance is the second difference with r = 1 - 3e-3.
    Trace trace(double theta) const;

  private:
    std::vector<double> samples_;
    double mean_ = 0;
    std::vector<std::complex<double>> coeff_;  //!< a_1 .. a_K
    double tail_ratio_ = 0;
};

class PoissonDiskField final : public HarmonicField
{
  public:
    //! `region` defaults to a fresh unit disk; pass a shared one so that
    //! several components report the same source region.
    explicit PoissonDiskField(PoissonDisk disk,
                              std::shared_ptr<geometry::PlanarDomain const> region = nullptr);

    Backend backend() const override { return Backend::poisson_disk; }
    geometry::Region const& region() const override { return *region_; }
    Estimate value(Vec2 const& x) const override { return {disk_.value(x), 0.0}; }
    std::optional<Vec2> exact_gradient(Vec2 const& x) const override { return disk_.gradient(x); }
    std::string describe() const override;

    PoissonDisk const& disk() const { return disk_; }

  private:
    PoissonDisk disk_;
    std::shared_ptr<geometry::PlanarDomain const> region_;
};

}  // namespace hqclab::harmonic
