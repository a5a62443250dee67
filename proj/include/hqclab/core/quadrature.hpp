#pragma once

#include <cstddef>
#include <vector>

namespace hqclab
{
struct QuadratureRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

//! Gauss-Legendre rule on [0, 1].
QuadratureRule gauss_legendre(std::size_t n);

}  // namespace hqclab
