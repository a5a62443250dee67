#pragma once

#include <cstdint>

#include "hqclab/geometry/domain.hpp"

namespace hqclab::geometry
{
struct QuasiconvexityEstimate
{
    double constant = 1;  //!< max (interior path length) / chord
    std::size_t pairs = 0;
    std::size_t non_straight = 0;  //!< pairs whose chord left the domain
};

//! Sample random interior pairs and measure the shortest interior path
//! against the chord. Paths that cannot be straight are routed through the
//! visibility graph of the boundary polygon.
QuasiconvexityEstimate measure_quasiconvexity(PlanarDomain const& domain,
                                              std::size_t pairs,
                                              std::uint64_t seed,
                                              std::size_t polygon_vertices = 256);

}  // namespace hqclab::geometry
