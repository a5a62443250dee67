#include "hqclab/hqc/map.hpp"

#include <cmath>
#include <sstream>

#include "hqclab/core/error.hpp"

namespace hqclab::hqc
{
using harmonic::Backend;

HarmonicMap::HarmonicMap(harmonic::FieldPtr u1,
                         harmonic::FieldPtr u2,
                         std::string name,
                         std::optional<geometry::PlanarDomain> target)
    : u1_(std::move(u1)), u2_(std::move(u2)), name_(std::move(name)), target_(std::move(target))
{
    HQC_REQUIRE(u1_ && u2_, ErrorKind::invalid_argument, "map needs two components");
    HQC_REQUIRE(&u1_->region() == &u2_->region(), ErrorKind::invalid_argument,
                "map components must share a source region");
}

Vec2 HarmonicMap::operator()(Vec2 const& x) const
{
    return {u1_->value(x).value, u2_->value(x).value};
}

MapTrace HarmonicMap::trace(Vec2 const& xi) const
{
    if (u1_->backend() == Backend::closed_form && u2_->backend() == Backend::closed_form)
        return {(*this)(xi), 0.0};
    auto const* p1 = dynamic_cast<harmonic::PoissonDiskField const*>(u1_.get());
    auto const* p2 = dynamic_cast<harmonic::PoissonDiskField const*>(u2_.get());
    HQC_REQUIRE(p1 && p2, ErrorKind::invalid_argument,
                "boundary trace needs closed-form or Poisson components");
    double theta = std::atan2(xi.y(), xi.x());
    auto a = p1->disk().trace(theta);
    auto b = p2->disk().trace(theta);
    return {{a.value, b.value}, std::max(a.tolerance, b.tolerance)};
}

HarmonicMap affine_map(std::shared_ptr<geometry::Region const> region,
                       Mat2 const& a,
                       Vec2 const& b,
                       std::optional<geometry::PlanarDomain> target,
                       std::string name)
{
    auto u1 = harmonic::linear_field(region, a.row(0).transpose(), b.x());
    auto u2 = harmonic::linear_field(region, a.row(1).transpose(), b.y());
    return HarmonicMap(u1, u2, std::move(name), std::move(target));
}

HarmonicMap conformal_plus_anti(std::shared_ptr<geometry::Region const> region,
                                std::complex<double> c)
{
    Mat2 a;
    a << 1 + c.real(), c.imag(), c.imag(), 1 - c.real();
    std::ostringstream os;
    os << "z+(" << c.real() << "," << c.imag() << ")zbar";
    return affine_map(std::move(region), a, Vec2::Zero(), std::nullopt, os.str());
}

//---------------------------------------------------------------------------//
std::string BoundaryMapSpec::describe() const
{
    std::ostringstream os;
    switch (kind)
    {
        case Kind::identity: os << "identity"; break;
        case Kind::twist: os << "twist(" << epsilon << ")"; break;
        case Kind::fourier:
            os << "fourier[";
            for (auto const& [k, c] : terms)
                os << k << ":" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i ";
            os << "]";
            break;
        case Kind::tabulated: os << "tabulated(" << table.size() << ")"; break;
    }
    return os.str();
}

std::vector<Vec2> BoundaryMapSpec::sample() const
{
    if (kind == Kind::tabulated)
        return table;
    HQC_REQUIRE(nodes > 0, ErrorKind::invalid_argument, "boundary map needs nodes");
    std::vector<Vec2> out(nodes);
    for (std::size_t j = 0; j < nodes; ++j)
    {
        double t = two_pi * static_cast<double>(j) / nodes;
        std::complex<double> z;
        switch (kind)
        {
            case Kind::identity: z = std::polar(1.0, t); break;
            case Kind::twist: z = std::polar(1.0, t + epsilon * std::sin(t)); break;
            case Kind::fourier:
                for (auto const& [k, c] : terms)
                    z += c * std::polar(1.0, k * t);
                break;
            case Kind::tabulated: break;
        }
        out[j] = {z.real(), z.imag()};
    }
    return out;
}

namespace
{
bool segments_cross(Vec2 const& a, Vec2 const& b, Vec2 const& c, Vec2 const& d)
{
    double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0
           && d4 != 0;
}

void require_injective(std::vector<Vec2> const& s)
{
    std::size_t n = s.size();
    double area = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        HQC_REQUIRE(s[i].allFinite(), ErrorKind::not_injective, "non-finite boundary sample");
        HQC_REQUIRE(s[i] != s[(i + 1) % n], ErrorKind::not_injective,
                    "repeated boundary sample at node " + std::to_string(i));
        area += cross(s[i], s[(i + 1) % n]);
    }
    HQC_REQUIRE(area > 0, ErrorKind::not_injective,
                "sampled boundary curve is not counterclockwise (degree != 1)");
    for (std::size_t i = 0; i < n; ++i)
    {
        Vec2 const& a = s[i];
        Vec2 const& b = s[(i + 1) % n];
        Vec2 lo = a.cwiseMin(b), hi = a.cwiseMax(b);
        for (std::size_t j = i + 2; j < n; ++j)
        {
            if (i == 0 && j == n - 1)
                continue;
            Vec2 const& c = s[j];
            Vec2 const& d = s[(j + 1) % n];
            if (std::max(c.x(), d.x()) < lo.x() || std::min(c.x(), d.x()) > hi.x()
                || std::max(c.y(), d.y()) < lo.y() || std::min(c.y(), d.y()) > hi.y())
                continue;
            HQC_REQUIRE(!segments_cross(a, b, c, d), ErrorKind::not_injective,
                        "sampled boundary curve crosses itself between nodes "
                            + std::to_string(i) + " and " + std::to_string(j));
        }
    }
}
}  // namespace

HarmonicMap poisson_extension(std::vector<Vec2> samples,
                              std::optional<geometry::PlanarDomain> target,
                              std::string name)
{
    HQC_REQUIRE(samples.size() >= 512, ErrorKind::quadrature_under_resolved,
                "Poisson extension needs at least 512 nodes, got "
                    + std::to_string(samples.size()));
    require_injective(samples);
    std::vector<double> xs(samples.size()), ys(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j)
    {
        xs[j] = samples[j].x();
        ys[j] = samples[j].y();
    }
    harmonic::PoissonDisk d1(std::move(xs));
    harmonic::PoissonDisk d2(std::move(ys));
    double tail = std::max(d1.tail_ratio(), d2.tail_ratio());
    HQC_REQUIRE(tail <= 1e-6, ErrorKind::quadrature_under_resolved,
                "boundary data under-resolved: coefficient tail ratio " + std::to_string(tail));
    auto disk = std::make_shared<geometry::PlanarDomain const>(geometry::PlanarDomain::disk());
    auto f1 = std::make_shared<harmonic::PoissonDiskField>(std::move(d1), disk);
    auto f2 = std::make_shared<harmonic::PoissonDiskField>(std::move(d2), disk);
    HarmonicMap map(f1, f2, std::move(name), std::move(target));
    map.samples_ = std::move(samples);
    return map;
}

HarmonicMap poisson_extension(BoundaryMapSpec const& spec,
                              std::optional<geometry::PlanarDomain> target)
{
    return poisson_extension(spec.sample(), std::move(target), spec.describe());
}

//---------------------------------------------------------------------------//
DifferentialSample differential(HarmonicMap const& map, Vec2 const& x)
{
    Mat2 df, se;
    for (int i = 0; i < 2; ++i)
    {
        auto g = harmonic::gradient_estimate(map.component(i), x);
        df.row(i) = g.gradient.transpose();
        se.row(i) = g.std_error.transpose();
    }
    auto s = make_sample(x, df);
    s.std_error = se;
    return s;
}

QcEstimate qc_constant(HarmonicMap const& map, std::vector<Vec2> const& points)
{
    HQC_REQUIRE(!points.empty(), ErrorKind::invalid_argument, "no sample points");
    QcEstimate out;
    out.samples.reserve(points.size());
    for (auto const& x : points)
    {
        auto s = differential(map, x);
        if (s.jacobian <= kJacobianFloor)
        {
            std::ostringstream os;
            os << "J_f = " << s.jacobian << " at (" << x.x() << ", " << x.y() << ")";
            throw Error(ErrorKind::jacobian_non_positive, os.str());
        }
        if (out.samples.empty() || s.distortion > out.k)
        {
            out.k = std::max(out.k, s.distortion);
            out.worst = x;
        }
        out.samples.push_back(s);
    }
    return out;
}

std::vector<Vec2> lattice_points(geometry::Region const& region, int n, double min_depth)
{
    auto box = region.bounds();
    HQC_REQUIRE(box.bounded() && n >= 1, ErrorKind::invalid_argument,
                "lattice needs a bounded region");
    std::vector<Vec2> out;
    for (int j = 0; j < n; ++j)
    {
        for (int i = 0; i < n; ++i)
        {
            Vec2 f((i + 0.5) / n, (j + 0.5) / n);
            Vec2 x = box.lo + f.cwiseProduct(box.hi - box.lo);
            if (region.contains(x) && region.distance(x) >= min_depth)
                out.push_back(x);
        }
    }
    return out;
}

}  // namespace hqclab::hqc
