#include "hqclab/hqc/rotated.hpp"

#include <algorithm>
#include <cmath>

#include "hqclab/core/error.hpp"

namespace hqclab::hqc
{
Mat2 RotatedMap::differential(Vec2 const& x) const
{
    return chart_.rotation() * hqc::differential(*base_, x).df;
}

MapTrace RotatedMap::trace(Vec2 const& eta) const
{
    auto t = base_->trace(eta);
    return {chart_.to_chart(t.value), t.tolerance};
}

double RotatedMap::boundary_residual(Vec2 const& eta) const
{
    Vec2 y = trace(eta).value;
    HQC_REQUIRE(std::abs(y.x()) < chart_.radius(), ErrorKind::trace_outside_chart,
                "boundary image leaves the chart ball");
    return std::abs(y.y() - chart_.graph(y.x()));
}

namespace
{
//! w . f + offset for a fixed direction w.
class ProjectedComponent final : public harmonic::HarmonicField
{
  public:
    ProjectedComponent(std::shared_ptr<HarmonicMap const> map, Vec2 w, double offset)
        : map_(std::move(map)), w_(std::move(w)), offset_(offset)
    {
    }

    harmonic::Backend backend() const override { return map_->component(0).backend(); }
    geometry::Region const& region() const override { return map_->source(); }

    Estimate value(Vec2 const& x) const override
    {
        auto a = map_->component(0).value(x);
        auto b = map_->component(1).value(x);
        return combine(a, b, offset_);
    }

    std::optional<Vec2> exact_gradient(Vec2 const& x) const override
    {
        auto a = map_->component(0).exact_gradient(x);
        auto b = map_->component(1).exact_gradient(x);
        if (!a || !b)
            return std::nullopt;
        return Vec2(w_.x() * *a + w_.y() * *b);
    }

    Estimate difference(Vec2 const& a, Vec2 const& b) const override
    {
        return combine(map_->component(0).difference(a, b),
                       map_->component(1).difference(a, b), 0.0);
    }

    double step_floor() const override
    {
        return std::max(map_->component(0).step_floor(), map_->component(1).step_floor());
    }

    std::string describe() const override { return "normal component of " + map_->name(); }

  private:
    Estimate combine(Estimate const& a, Estimate const& b, double c) const
    {
        return {w_.x() * a.value + w_.y() * b.value + c,
                std::hypot(w_.x() * a.std_error, w_.y() * b.std_error)};
    }

    std::shared_ptr<HarmonicMap const> map_;
    Vec2 w_;
    double offset_;
};
}  // namespace

harmonic::FieldPtr RotatedMap::normal_component() const
{
    Vec2 w = chart_.rotation().row(1).transpose();
    return std::make_shared<ProjectedComponent>(base_, w, -w.dot(chart_.base_point()));
}

double RotatedMap::max_residual() const
{
    double m = 0;
    for (auto const& s : samples_)
        m = std::max(m, s.residual);
    return m;
}

RotatedMap rotate_to_chart(std::shared_ptr<HarmonicMap const> map,
                           Vec2 const& xi,
                           std::optional<double> arc,
                           std::size_t samples,
                           std::optional<double> alpha)
{
    HQC_REQUIRE(map && map->target(), ErrorKind::invalid_argument,
                "rotation needs a map with a target domain");
    HQC_REQUIRE(std::abs(xi.norm() - 1) < 1e-12, ErrorKind::invalid_argument,
                "xi must lie on the unit circle");
    HQC_REQUIRE(samples >= 2, ErrorKind::invalid_argument, "need at least two samples");
    auto q = map->trace(xi);
    auto const& target = *map->target();
    // project the trace onto the target boundary; the offset is trace error
    auto proj = target.closest(q.value);
    HQC_REQUIRE(proj.delta <= std::max(1e-6, 10 * q.tolerance), ErrorKind::trace_outside_chart,
                "trace at xi is " + std::to_string(proj.delta) + " off the target boundary");
    RotatedMap rm(map, geometry::flatten_chart(target, proj.point, std::nullopt, alpha), xi);

    double theta0 = std::atan2(xi.y(), xi.x());
    auto window = [&](double half) {
        std::vector<BoundarySample> out;
        out.reserve(samples);
        for (std::size_t k = 0; k < samples; ++k)
        {
            double phi = -half + 2 * half * static_cast<double>(k) / (samples - 1);
            Vec2 eta(std::cos(theta0 + phi), std::sin(theta0 + phi));
            auto t = rm.trace(eta);
            BoundarySample s{eta, t.value, 0.0, t.tolerance};
            if (!(std::abs(s.image.x()) < rm.chart().radius()
                  && s.image.norm() < rm.chart().radius()))
                return std::optional<std::vector<BoundarySample>>{};
            s.residual = std::abs(s.image.y() - rm.chart().graph(s.image.x()));
            out.push_back(s);
        }
        return std::optional<std::vector<BoundarySample>>{std::move(out)};
    };

    if (arc)
    {
        HQC_REQUIRE(*arc > 0 && *arc < pi, ErrorKind::invalid_argument, "arc must be in (0, pi)");
        auto w = window(*arc);
        HQC_REQUIRE(w.has_value(), ErrorKind::trace_outside_chart,
                    "boundary images of the window leave B(0, r) with r = "
                        + std::to_string(rm.chart().radius()));
        rm.samples_ = std::move(*w);
        return rm;
    }
    for (double half = pi / 4; half > 1e-6; half /= 2)
    {
        if (auto w = window(half))
        {
            rm.samples_ = std::move(*w);
            return rm;
        }
    }
    throw Error(ErrorKind::trace_outside_chart, "no boundary window fits in the chart");
}

}  // namespace hqclab::hqc
