#include "hqclab/hqc/svd2.hpp"

#include <cmath>

namespace hqclab::hqc
{
SingularValues singular_values(Mat2 const& m)
{
    // Split m into its conformal and anticonformal parts: the singular values
    // are |p| + |q| and ||p| - |q||.
    double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    double p = 0.5 * std::hypot(a + d, c - b);
    double q = 0.5 * std::hypot(a - d, b + c);
    return {p + q, std::abs(p - q)};
}

}  // namespace hqclab::hqc
