#include "hqclab/geometry/path.hpp"

#include <algorithm>
#include <cmath>

#include "hqclab/core/error.hpp"

namespace hqclab::geometry
{
namespace
{
PathPiece sample_piece(PlanarDomain const& domain,
                       std::vector<Vec2> points,
                       bool include_ends)
{
    PathPiece piece;
    piece.points = std::move(points);
    piece.delta.resize(piece.points.size());
    for (std::size_t i = 0; i < piece.points.size(); ++i)
    {
        bool const end = i == 0 || i + 1 == piece.points.size();
        Vec2 const& p = piece.points[i];
        if (!(end && !include_ends))
        {
            HQC_REQUIRE(domain.contains(p), ErrorKind::path_leaves_domain,
                        "three-piece path leaves the domain");
        }
        piece.delta[i] = domain.distance(p);
        if (i > 0)
            piece.length += (p - piece.points[i - 1]).norm();
    }
    return piece;
}
}  // namespace

Vec2 ThreePiecePath::cigar_point(double tau) const
{
    double const s = s_xi_ + tau * (s_eta_ - s_xi_);
    return domain_.boundary_point(s) + rho_ * domain_.normal_at(s);
}

double ThreePiecePath::cigar_speed(double tau) const
{
    double const s = s_xi_ + tau * (s_eta_ - s_xi_);
    Vec2 const d = domain_.boundary_derivative(s) + rho_ * domain_.normal_derivative(s);
    return std::abs(s_eta_ - s_xi_) * d.norm();
}

double ThreePiecePath::max_cigar_deviation() const
{
    double worst = 0;
    for (double d : cigar_.delta)
        worst = std::max(worst, std::abs(d - rho_) / rho_);
    return worst;
}

ThreePiecePath three_piece_path(PlanarDomain const& domain,
                                Vec2 const& xi,
                                Vec2 const& eta,
                                std::size_t samples)
{
    HQC_REQUIRE(samples >= 2, ErrorKind::invalid_argument, "need at least two samples per piece");
    ThreePiecePath path;
    path.domain_ = domain;
    path.xi_ = xi;
    path.eta_ = eta;
    path.rho_ = (xi - eta).norm();
    HQC_REQUIRE(path.rho_ > 0, ErrorKind::invalid_argument, "path endpoints coincide");
    HQC_REQUIRE(path.rho_ < domain.tubular_radius(), ErrorKind::tubular_violation,
                "rho exceeds the tubular radius");

    path.s_xi_ = domain.parameter_of(xi);
    path.s_eta_ = domain.parameter_of(eta);
    if (!domain.is_half_plane())
    {
        // Follow the shorter boundary arc.
        double d = path.s_eta_ - path.s_xi_;
        if (d > 0.5)
            d -= 1;
        else if (d < -0.5)
            d += 1;
        path.s_eta_ = path.s_xi_ + d;
    }
    path.nu_xi_ = domain.normal_at(path.s_xi_);
    path.nu_eta_ = domain.normal_at(path.s_eta_);

    std::vector<Vec2> rise(samples), cigar(samples), descent(samples);
    double arc = 0;
    Vec2 prev = domain.boundary_point(path.s_xi_);
    for (std::size_t i = 0; i < samples; ++i)
    {
        double const u = static_cast<double>(i) / (samples - 1);
        rise[i] = path.rise_point(u * path.rho_);
        cigar[i] = path.cigar_point(u);
        descent[i] = path.descent_point((1 - u) * path.rho_);
        Vec2 const b = domain.boundary_point(path.s_xi_ + u * (path.s_eta_ - path.s_xi_));
        arc += (b - prev).norm();
        prev = b;
    }
    path.arc_length_ = arc;
    path.rise_ = sample_piece(domain, std::move(rise), false);
    path.cigar_ = sample_piece(domain, std::move(cigar), true);
    path.descent_ = sample_piece(domain, std::move(descent), false);
    return path;
}

}  // namespace hqclab::geometry
