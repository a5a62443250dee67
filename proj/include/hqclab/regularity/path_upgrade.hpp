#pragma once

#include <functional>
#include <optional>

#include "hqclab/geometry/path.hpp"
#include "hqclab/hqc/map.hpp"

namespace hqclab::regularity
{
struct PieceIntegral
{
    double numeric = 0;  //!< quadrature of |Df| along the piece
    double bound = 0;    //!< the collar bound C delta^(beta - 1) integrated
};

struct PathHolderCert
{
    double rho = 0;
    double beta1 = 0;
    double collar_constant = 0;  //!< C in |Df| <= C delta^(beta1 - 1)
    PieceIntegral rise, cigar, descent;
    double path_length = 0;
    double total_numeric = 0;
    double total_bound = 0;
    double certified_constant = 0;  //!< C' = total_bound / rho^beta1
    double direct = 0;              //!< |f(xi) - f(eta)|
    double direct_quotient = 0;     //!< direct / rho^beta1
    bool passed = false;
};

using DfNorm = std::function<double(Vec2 const&)>;

/*!
 * Integrate |Df| along the three-piece path from xi to eta and hold each
 * piece against the collar bound. Normal pieces use the substitution
 * s = rho v^(1/beta) so a delta^(beta - 1) singularity is integrated exactly.
 */
PathHolderCert path_holder_upgrade(geometry::PlanarDomain const& domain,
                                   Vec2 const& xi,
                                   Vec2 const& eta,
                                   double beta1,
                                   double collar_constant,
                                   DfNorm const& df_norm,
                                   std::optional<double> direct = std::nullopt);

//! Map version: |Df| from the differential, direct value from the traces.
PathHolderCert path_holder_upgrade(hqc::HarmonicMap const& map,
                                   Vec2 const& xi,
                                   Vec2 const& eta,
                                   double beta1,
                                   double collar_constant);

}  // namespace hqclab::regularity
