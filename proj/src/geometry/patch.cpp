#include "hqclab/geometry/patch.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hqclab/core/error.hpp"

namespace hqclab::geometry
{
namespace
{
constexpr std::size_t kScanSamples = 4096;
constexpr std::size_t kPieceSamples = 512;

// Count maximal runs of `true` in a periodic boolean sequence.
std::size_t count_runs(std::vector<bool> const& flags)
{
    std::size_t runs = 0;
    std::size_t const n = flags.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        if (flags[i] && !flags[(i + n - 1) % n])
            ++runs;
    }
    if (runs == 0 && n > 0 && flags[0])
        runs = 1;
    return runs;
}
}  // namespace

BoundaryPatch::BoundaryPatch(PlanarDomain domain, Vec2 center, double radius)
    : domain_(std::move(domain)), center_(std::move(center)), radius_(radius)
{
}

bool BoundaryPatch::contains(Vec2 const& x) const
{
    return (x - center_).norm() < radius_ && domain_.contains(x);
}

double BoundaryPatch::distance(Vec2 const& x) const
{
    return std::min(domain_.distance(x), std::abs(radius_ - (x - center_).norm()));
}

BoundaryHit BoundaryPatch::project(Vec2 const& x) const
{
    Projection const p = domain_.closest(x);
    double const r = (x - center_).norm();
    double const to_sphere = std::abs(radius_ - r);
    if (p.delta <= to_sphere)
        return {p.point, BoundaryPart::gamma};
    Vec2 const dir = r > 0 ? Vec2((x - center_) / r) : normal_;
    return {center_ + radius_ * dir, BoundaryPart::sigma};
}

BoundaryPart BoundaryPatch::classify(Vec2 const& b) const
{
    double const to_sphere = std::abs(radius_ - (b - center_).norm());
    return domain_.distance(b) <= to_sphere ? BoundaryPart::gamma : BoundaryPart::sigma;
}

BoundingBox BoundaryPatch::bounds() const
{
    BoundingBox box{center_.array() - radius_, center_.array() + radius_};
    BoundingBox const d = domain_.bounds();
    box.lo = box.lo.cwiseMax(d.lo);
    box.hi = box.hi.cwiseMin(d.hi);
    return box;
}

std::string BoundaryPatch::describe() const
{
    std::ostringstream os;
    os << "patch(" << domain_.describe() << ", x0=(" << center_.x() << ","
       << center_.y() << "), r0=" << radius_ << ", c=" << collar_ << ")";
    return os.str();
}

bool BoundaryPatch::separated(double c) const
{
    double const r = 2 * c * radius_;
    return std::all_of(sigma_.begin(), sigma_.end(),
                       [&](Vec2 const& s) { return (s - center_).norm() >= r; });
}

BoundaryPatch build_patch(PlanarDomain const& domain,
                          Vec2 const& x0,
                          double r0,
                          std::optional<double> collar)
{
    HQC_REQUIRE(r0 > 0, ErrorKind::invalid_argument, "patch radius must be positive");
    BoundaryPatch patch(domain, x0, r0);
    patch.normal_ = domain.inward_normal(x0);

    // Gamma: boundary samples inside the ball, one connected arc through x0.
    if (domain.is_half_plane())
    {
        for (std::size_t i = 0; i < kPieceSamples; ++i)
        {
            double const u = -1 + 2 * (i + 0.5) / kPieceSamples;
            patch.gamma_.emplace_back(x0.x() + u * r0, 0.0);
        }
    }
    else
    {
        auto const& curve = domain.boundary();
        double const s0 = curve.parameter_of(x0);
        std::vector<bool> inside(kScanSamples);
        for (std::size_t i = 0; i < kScanSamples; ++i)
        {
            double const s = s0 + static_cast<double>(i) / kScanSamples - 0.5;
            inside[i] = (curve.point(s) - x0).norm() < r0;
        }
        HQC_REQUIRE(count_runs(inside) == 1, ErrorKind::patch_degenerate,
                    "boundary inside the patch ball is not a single arc");
        std::size_t a = kScanSamples / 2, b = kScanSamples / 2;
        while (a > 0 && inside[a - 1])
            --a;
        while (b + 1 < kScanSamples && inside[b + 1])
            ++b;
        HQC_REQUIRE(a > 0 && b + 1 < kScanSamples, ErrorKind::patch_degenerate,
                    "patch ball contains the whole boundary");
        double const sa = s0 + static_cast<double>(a) / kScanSamples - 0.5;
        double const sb = s0 + static_cast<double>(b + 1) / kScanSamples - 0.5;
        for (std::size_t i = 0; i < kPieceSamples; ++i)
        {
            Vec2 const p = curve.point(sa + (sb - sa) * (i + 0.5) / kPieceSamples);
            if ((p - x0).norm() < r0)
                patch.gamma_.push_back(p);
        }
    }

    // Sigma: sphere samples inside the closed domain, one connected arc.
    std::vector<bool> on_sigma(kScanSamples);
    for (std::size_t i = 0; i < kScanSamples; ++i)
    {
        double const th = two_pi * (i + 0.5) / kScanSamples;
        Vec2 const p = x0 + r0 * Vec2(std::cos(th), std::sin(th));
        on_sigma[i] = domain.contains(p);
        if (on_sigma[i])
            patch.sigma_.push_back(p);
    }
    HQC_REQUIRE(count_runs(on_sigma) == 1, ErrorKind::patch_degenerate,
                "patch cap Sigma is not a single arc");

    auto admissible = [&](double c) {
        return patch.separated(c) && 2 * c * r0 <= domain.uniqueness_radius();
    };
    if (collar)
    {
        HQC_REQUIRE(*collar > 0 && *collar < 1, ErrorKind::patch_degenerate,
                    "collar fraction must lie in (0, 1)");
        HQC_REQUIRE(admissible(*collar), ErrorKind::patch_degenerate,
                    "collar fraction " + std::to_string(*collar)
                        + " violates the ball-Sigma separation");
        patch.collar_ = *collar;
    }
    else
    {
        for (double c : kCollarCandidates)
        {
            if (admissible(c))
            {
                patch.collar_ = c;
                break;
            }
        }
        HQC_REQUIRE(patch.collar_ > 0, ErrorKind::patch_degenerate,
                    "no admissible collar fraction");
    }
    return patch;
}

BoundaryPatch half_disk_patch(double r0)
{
    return build_patch(PlanarDomain::half_plane(), Vec2::Zero(), r0);
}

}  // namespace hqclab::geometry
