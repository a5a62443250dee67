#include "hqclab/core/quadrature.hpp"

#include <cmath>

#include "hqclab/core/error.hpp"
#include "hqclab/core/types.hpp"

namespace hqclab
{
QuadratureRule gauss_legendre(std::size_t n)
{
    HQC_REQUIRE(n >= 1, ErrorKind::invalid_argument, "gauss_legendre: n = 0");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton on P_n from the Chebyshev-like initial guess, then map to [0,1].
    for (std::size_t i = 0; i < n; ++i)
    {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter)
        {
            double p0 = 1, p1 = x;
            for (std::size_t k = 2; k <= n; ++k)
            {
                double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double const pn = n == 1 ? x : p1;
            double const pnm1 = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pnm1) / (x * x - 1);
            double const dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        rule.nodes[n - 1 - i] = 0.5 * (x + 1);
        rule.weights[n - 1 - i] = 1.0 / ((1 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace hqclab
