#include "hqclab/geometry/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hqclab/core/error.hpp"

namespace hqclab::geometry
{
namespace
{
constexpr std::size_t kCoarseSamples = 256;

bool segments_cross(Vec2 const& a, Vec2 const& b, Vec2 const& c, Vec2 const& d)
{
    double const d1 = cross(b - a, c - a);
    double const d2 = cross(b - a, d - a);
    double const d3 = cross(d - c, a - c);
    double const d4 = cross(d - c, b - c);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0))
           && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// Smooth cutoff exp(1 - 1/(1-u^2)) on |u| < 1 and its derivatives.
double cutoff(double u)
{
    if (std::abs(u) >= 1)
        return 0;
    return std::exp(1 - 1 / (1 - u * u));
}

double cutoff_d1(double u)
{
    if (std::abs(u) >= 1)
        return 0;
    double const q = 1 - u * u;
    return cutoff(u) * (-2 * u / (q * q));
}

double cutoff_d2(double u)
{
    if (std::abs(u) >= 1)
        return 0;
    double const q = 1 - u * u;
    return cutoff(u)
           * (4 * u * u / (q * q * q * q) - (2 + 6 * u * u) / (q * q * q));
}
}  // namespace

double wrap_parameter(double s)
{
    s -= std::floor(s);
    return s >= 1.0 ? 0.0 : s;
}

double parameter_gap(double s, double t)
{
    double const d = std::abs(wrap_parameter(s) - wrap_parameter(t));
    return std::min(d, 1.0 - d);
}

struct BoundaryCurve::Impl
{
    std::string name;
    Vec2 center{0, 0};
    Radial radial;
    double alpha = 1;
    std::size_t resolution = 1024;
    bool circle = false;
    double circle_radius = 0;

    // Derived at construction.
    std::vector<Vec2> coarse;
    double holder_const = 0;
    double length = 0;
    double diameter = 0;

    Vec2 point(double s) const
    {
        double const th = two_pi * s;
        double const r = radial.r(th);
        return center + r * Vec2(std::cos(th), std::sin(th));
    }

    Vec2 derivative(double s) const
    {
        double const th = two_pi * s;
        Vec2 const e(std::cos(th), std::sin(th));
        return two_pi * (radial.dr(th) * e + radial.r(th) * perp(e));
    }

    Vec2 second(double s) const
    {
        double const th = two_pi * s;
        Vec2 const e(std::cos(th), std::sin(th));
        double const r = radial.r(th);
        double const dr = radial.dr(th);
        double const ddr = radial.ddr(th);
        return two_pi * two_pi * ((ddr - r) * e + 2 * dr * perp(e));
    }

    void finalize()
    {
        coarse.resize(kCoarseSamples);
        for (std::size_t i = 0; i < kCoarseSamples; ++i)
            coarse[i] = point(static_cast<double>(i) / kCoarseSamples);

        // Arc length, unit tangents and diameter on the fine polyline.
        std::size_t const n = resolution;
        std::vector<Vec2> pts(n), tangents(n);
        std::vector<double> arc(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i)
        {
            double const s = static_cast<double>(i) / n;
            pts[i] = point(s);
            tangents[i] = derivative(s).normalized();
        }
        for (std::size_t i = 0; i < n; ++i)
            arc[i + 1] = arc[i] + (pts[(i + 1) % n] - pts[i]).norm();
        length = arc[n];

        diameter = 0;
        holder_const = 0;
        for (std::size_t i = 0; i < n; ++i)
        {
            for (std::size_t j = i + 1; j < n; ++j)
            {
                diameter = std::max(diameter, (pts[i] - pts[j]).norm());
                double gap = arc[j] - arc[i];
                gap = std::min(gap, length - gap);
                if (gap < 1e-4)
                    continue;
                double const q = (tangents[i] - tangents[j]).norm()
                                 / std::pow(gap, alpha);
                holder_const = std::max(holder_const, q);
            }
        }
    }
};

BoundaryCurve::BoundaryCurve(std::shared_ptr<Impl const> impl)
    : impl_(std::move(impl))
{
}

BoundaryCurve BoundaryCurve::from_radial(std::string name,
                                         Vec2 const& center,
                                         Radial radial,
                                         double holder_alpha,
                                         std::size_t resolution)
{
    HQC_REQUIRE(holder_alpha > 0 && holder_alpha <= 1, ErrorKind::invalid_curve,
                "holder exponent must lie in (0, 1]");
    HQC_REQUIRE(resolution >= 64, ErrorKind::invalid_curve,
                "curve resolution must be at least 64");
    auto impl = std::make_shared<Impl>();
    impl->name = std::move(name);
    impl->center = center;
    impl->radial = std::move(radial);
    impl->alpha = holder_alpha;
    impl->resolution = resolution;
    impl->finalize();
    return BoundaryCurve(std::move(impl));
}

BoundaryCurve BoundaryCurve::circle(Vec2 const& center, double radius)
{
    HQC_REQUIRE(radius > 0, ErrorKind::invalid_curve, "circle radius must be positive");
    Radial radial{[radius](double) { return radius; },
                  [](double) { return 0.0; },
                  [](double) { return 0.0; }};
    auto impl = std::make_shared<Impl>();
    impl->name = "circle";
    impl->center = center;
    impl->radial = std::move(radial);
    impl->alpha = 1;
    impl->circle = true;
    impl->circle_radius = radius;
    impl->finalize();
    return BoundaryCurve(std::move(impl));
}

BoundaryCurve BoundaryCurve::ellipse(double a, double b)
{
    HQC_REQUIRE(a > 0 && b > 0, ErrorKind::invalid_curve, "ellipse axes must be positive");
    double const ab = a * b;
    double const k = a * a - b * b;
    auto den = [a, b](double t) {
        double const c = std::cos(t), s = std::sin(t);
        return b * b * c * c + a * a * s * s;
    };
    Radial radial{
        [=](double t) { return ab / std::sqrt(den(t)); },
        [=](double t) {
            return -0.5 * ab * std::pow(den(t), -1.5) * k * std::sin(2 * t);
        },
        [=](double t) {
            double const d = den(t);
            double const d1 = k * std::sin(2 * t);
            double const d2 = 2 * k * std::cos(2 * t);
            return -0.5 * ab
                   * (-1.5 * std::pow(d, -2.5) * d1 * d1 + std::pow(d, -1.5) * d2);
        }};
    return from_radial("ellipse", Vec2::Zero(), std::move(radial), 1.0);
}

BoundaryCurve BoundaryCurve::fourier(std::vector<double> coeffs)
{
    double total = 0;
    for (double c : coeffs)
        total += std::abs(c);
    HQC_REQUIRE(total < 1, ErrorKind::invalid_curve,
                "Fourier coefficients must keep r(theta) positive");
    auto shared = std::make_shared<std::vector<double> const>(std::move(coeffs));
    Radial radial{[shared](double t) {
                      double r = 1;
                      for (std::size_t k = 0; k < shared->size(); ++k)
                          r += (*shared)[k] * std::cos((k + 1.0) * t);
                      return r;
                  },
                  [shared](double t) {
                      double r = 0;
                      for (std::size_t k = 0; k < shared->size(); ++k)
                          r -= (*shared)[k] * (k + 1.0) * std::sin((k + 1.0) * t);
                      return r;
                  },
                  [shared](double t) {
                      double r = 0;
                      for (std::size_t k = 0; k < shared->size(); ++k)
                          r -= (*shared)[k] * (k + 1.0) * (k + 1.0)
                               * std::cos((k + 1.0) * t);
                      return r;
                  }};
    return from_radial("fourier_disk", Vec2::Zero(), std::move(radial), 1.0);
}

BoundaryCurve BoundaryCurve::bump(double alpha, double amplitude, double width, double angle)
{
    HQC_REQUIRE(alpha > 0 && alpha < 1, ErrorKind::invalid_curve,
                "bump exponent must lie in (0, 1)");
    HQC_REQUIRE(width > 0 && width <= pi, ErrorKind::invalid_curve,
                "bump width must lie in (0, pi]");
    HQC_REQUIRE(std::abs(amplitude) * std::pow(width, 1 + alpha) < 0.5,
                ErrorKind::invalid_curve, "bump amplitude too large");
    double const p = 1 + alpha;
    Radial radial{
        [=](double t) {
            double const phi = wrap_angle(t - angle);
            return 1 + amplitude * std::pow(std::abs(phi), p) * cutoff(phi / width);
        },
        [=](double t) {
            double const phi = wrap_angle(t - angle);
            double const a = std::abs(phi);
            double const sg = phi < 0 ? -1.0 : 1.0;
            return amplitude
                   * (p * sg * std::pow(a, alpha) * cutoff(phi / width)
                      + std::pow(a, p) * cutoff_d1(phi / width) / width);
        },
        [=](double t) {
            double const phi = wrap_angle(t - angle);
            double const a = std::abs(phi);
            if (a == 0)
                return std::numeric_limits<double>::infinity();
            double const sg = phi < 0 ? -1.0 : 1.0;
            double const u = phi / width;
            return amplitude
                   * (p * alpha * std::pow(a, alpha - 1) * cutoff(u)
                      + 2 * p * sg * std::pow(a, alpha) * cutoff_d1(u) / width
                      + std::pow(a, p) * cutoff_d2(u) / (width * width));
        }};
    return from_radial("bump_disk", Vec2::Zero(), std::move(radial), alpha);
}

Vec2 BoundaryCurve::point(double s) const
{
    return impl_->point(s);
}

Vec2 BoundaryCurve::derivative(double s) const
{
    return impl_->derivative(s);
}

Vec2 BoundaryCurve::second_derivative(double s) const
{
    return impl_->second(s);
}

Vec2 BoundaryCurve::unit_tangent(double s) const
{
    Vec2 const d = derivative(s);
    double const n = d.norm();
    HQC_REQUIRE(n > 1e-12, ErrorKind::degenerate_tangent,
                "tangent vanishes at s = " + std::to_string(s));
    return d / n;
}

Vec2 BoundaryCurve::inward_normal(double s) const
{
    return perp(unit_tangent(s));
}

double BoundaryCurve::parameter_of(Vec2 const& x) const
{
    Vec2 const d = x - impl_->center;
    return wrap_parameter(std::atan2(d.y(), d.x()) / two_pi);
}

double BoundaryCurve::radius_at(double theta) const
{
    return impl_->radial.r(theta);
}

double BoundaryCurve::radial_gap(Vec2 const& x) const
{
    Vec2 const d = x - impl_->center;
    return impl_->radial.r(std::atan2(d.y(), d.x())) - d.norm();
}

bool BoundaryCurve::contains(Vec2 const& x) const
{
    return radial_gap(x) > 0;
}

Vec2 const& BoundaryCurve::center() const
{
    return impl_->center;
}

bool BoundaryCurve::is_circle() const
{
    return impl_->circle;
}

double BoundaryCurve::circle_radius() const
{
    return impl_->circle_radius;
}

std::string const& BoundaryCurve::name() const
{
    return impl_->name;
}

double BoundaryCurve::holder_alpha() const
{
    return impl_->alpha;
}

double BoundaryCurve::holder_const() const
{
    return impl_->holder_const;
}

std::size_t BoundaryCurve::resolution() const
{
    return impl_->resolution;
}

double BoundaryCurve::length() const
{
    return impl_->length;
}

double BoundaryCurve::diameter() const
{
    return impl_->diameter;
}

std::span<Vec2 const> BoundaryCurve::coarse_samples() const
{
    return impl_->coarse;
}

void BoundaryCurve::validate(double tol) const
{
    std::size_t const n = impl_->resolution;
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        double const s = static_cast<double>(i) / n;
        pts[i] = point(s);
        HQC_REQUIRE(derivative(s).norm() > 1e-10, ErrorKind::invalid_curve,
                    "irregular parametrization at s = " + std::to_string(s));
    }
    HQC_REQUIRE((point(1.0 - 1e-12) - point(0.0)).norm() < 1e-8,
                ErrorKind::invalid_curve, "curve is not closed");
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = i + 2; j < n; ++j)
        {
            if (i == 0 && j == n - 1)
                continue;
            HQC_REQUIRE(!segments_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]),
                        ErrorKind::invalid_curve, "sampled curve self-intersects");
        }
    }

    // Re-measure the Holder quotient on an offset sample set; it must not
    // exceed the recorded constant.
    std::size_t const m = n / 2 + 1;
    std::vector<Vec2> tangents(m), q(m);
    std::vector<double> arc(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i)
    {
        double const s = (i + 0.5) / m;
        q[i] = point(s);
        tangents[i] = unit_tangent(s);
    }
    for (std::size_t i = 0; i < m; ++i)
        arc[i + 1] = arc[i] + (q[(i + 1) % m] - q[i]).norm();
    double const len = arc[m];
    for (std::size_t i = 0; i < m; ++i)
    {
        for (std::size_t j = i + 1; j < m; ++j)
        {
            double gap = arc[j] - arc[i];
            gap = std::min(gap, len - gap);
            if (gap < 1e-4)
                continue;
            double const quotient = (tangents[i] - tangents[j]).norm()
                                    / std::pow(gap, impl_->alpha);
            // Coarser sampling can only see a smaller sup up to discretization
            // of the arc length, so allow the polyline error on top of tol.
            HQC_REQUIRE(quotient <= impl_->holder_const * (1 + tol) + 1e-3,
                        ErrorKind::invalid_curve, "Holder bound violated");
        }
    }
}

}  // namespace hqclab::geometry
