#include "hqclab/regularity/iteration.hpp"

#include <cmath>
#include <optional>

#include "hqclab/core/error.hpp"

namespace hqclab::regularity
{
namespace
{
std::vector<double> sequence(double alpha, double beta0)
{
    std::vector<double> out;
    long double b = beta0;
    long double const g = 1.0L + static_cast<long double>(alpha);
    out.push_back(static_cast<double>(b));
    while (out.back() <= 1)
    {
        b *= g;
        out.push_back(static_cast<double>(b));
    }
    return out;
}

bool clear(std::vector<double> const& seq, double clearance)
{
    for (double b : seq)
    {
        if (std::abs(b - 1) < clearance)
            return false;
    }
    return true;
}
}  // namespace

IterationTrace exponent_iteration(double alpha, double beta0, double clearance)
{
    HQC_REQUIRE(alpha > 0 && alpha < 1, ErrorKind::invalid_argument,
                "alpha must be in (0, 1)");
    HQC_REQUIRE(beta0 > 0 && beta0 < 1, ErrorKind::invalid_argument,
                "beta0 must be in (0, 1)");
    IterationTrace trace;
    trace.alpha = alpha;
    trace.beta0_requested = beta0;
    trace.beta = sequence(alpha, beta0);
    if (!clear(trace.beta, clearance))
    {
        std::optional<double> shift;
        for (int j = 60; j >= 0 && !shift; --j)
        {
            double s = std::ldexp(1e-3, -j);
            if (beta0 - s > 0 && clear(sequence(alpha, beta0 - s), clearance))
                shift = s;
        }
        HQC_REQUIRE(shift, ErrorKind::invalid_argument, "no endpoint shift restores clearance");
        trace.endpoint_shift = *shift;
        trace.beta = sequence(alpha, beta0 - *shift);
    }
    trace.m0 = trace.beta.size() - 1;
    return trace;
}

}  // namespace hqclab::regularity
