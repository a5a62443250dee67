#pragma once

#include <vector>

namespace hqclab::regularity
{
struct IterationTrace
{
    double alpha = 0;
    double beta0_requested = 0;
    double endpoint_shift = 0;  //!< beta0 = beta0_requested - endpoint_shift
    std::vector<double> beta;   //!< beta_0 ... beta_m0
    std::size_t m0 = 0;         //!< first index with beta > 1
    std::vector<double> constants;  //!< per-stage constants, filled by the pipeline

    double beta0() const { return beta.front(); }
};

/*!
 * beta_{m+1} = (1 + alpha) beta_m until beta exceeds 1.
 *
 * The products are accumulated in long double so the recorded values are
 * the correctly rounded powers (1 + alpha)^m beta0. If some beta_m lands
 * within `clearance` of 1, beta0 is lowered by the smallest shift
 * 1e-3 2^-j that restores the clearance.
 */
IterationTrace exponent_iteration(double alpha, double beta0, double clearance = 1e-6);

}  // namespace hqclab::regularity
