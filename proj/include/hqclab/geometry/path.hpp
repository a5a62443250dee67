#pragma once

#include <vector>

#include "hqclab/geometry/domain.hpp"

namespace hqclab::geometry
{
//! Sampled piece of a path: points with their measured boundary distance.
struct PathPiece
{
    std::vector<Vec2> points;
    std::vector<double> delta;
    double length = 0;
};

//---------------------------------------------------------------------------//
/*!
 * Path joining two boundary points through the collar:
 * gamma1 runs up the normal at xi to depth rho = |xi - eta|, gamma2 follows
 * the boundary arc sigma at constant depth rho, gamma3 runs down the normal
 * at eta.
 */
class ThreePiecePath
{
  public:
    double rho() const { return rho_; }
    Vec2 const& start() const { return xi_; }
    Vec2 const& end() const { return eta_; }
    //! Length of the boundary arc sigma from xi to eta.
    double arc_length() const { return arc_length_; }

    PathPiece const& rise() const { return rise_; }
    PathPiece const& cigar() const { return cigar_; }
    PathPiece const& descent() const { return descent_; }
    double length() const { return rise_.length + cigar_.length + descent_.length; }

    //! gamma1(s) = xi + s nu(xi), s in [0, rho].
    Vec2 rise_point(double s) const { return xi_ + s * nu_xi_; }
    //! gamma3 run from eta upwards: eta + s nu(eta), s in [0, rho].
    Vec2 descent_point(double s) const { return eta_ + s * nu_eta_; }
    //! gamma2(tau) = sigma(tau) + rho nu(sigma(tau)), tau in [0, 1].
    Vec2 cigar_point(double tau) const;
    //! |d gamma2 / d tau|.
    double cigar_speed(double tau) const;

    //! max over gamma2 samples of |delta - rho| / rho.
    double max_cigar_deviation() const;

  private:
    friend ThreePiecePath three_piece_path(PlanarDomain const&, Vec2 const&,
                                           Vec2 const&, std::size_t);
    PlanarDomain domain_ = PlanarDomain::half_plane();
    Vec2 xi_, eta_, nu_xi_, nu_eta_;
    double s_xi_ = 0, s_eta_ = 0;
    double rho_ = 0;
    double arc_length_ = 0;
    PathPiece rise_, cigar_, descent_;
};

//! Throws TubularViolation if rho >= r_D and PathLeavesDomain if an interior
//! sample of the path is outside the domain.
ThreePiecePath three_piece_path(PlanarDomain const& domain,
                                Vec2 const& xi,
                                Vec2 const& eta,
                                std::size_t samples = 256);

}  // namespace hqclab::geometry
