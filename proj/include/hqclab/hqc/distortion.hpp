#pragma once

#include <Eigen/Core>
#include <vector>

#include "hqclab/core/types.hpp"

namespace hqclab::hqc
{
//! Differential at one point with its distortion data.
struct DifferentialSample
{
    Vec2 x = Vec2::Zero();
    Mat2 df = Mat2::Zero();
    Mat2 std_error = Mat2::Zero();
    double sigma_max = 0;  //!< |Df|
    double sigma_min = 0;  //!< l(Df)
    double jacobian = 0;
    double distortion = 0;  //!< |Df|^2 / J, infinite when J <= 0
};

DifferentialSample make_sample(Vec2 const& x, Mat2 const& df);

//! Smallest H with |A| <= H l(A) for every A satisfying |A|^n <= K det A.
//! Since det A <= |A|^{n-1} l(A), H = K; the bound is attained by
//! diag(1, ..., 1, 1/K). In the plane this coincides with K^{1/(n-1)}.
//! Throws InvalidArgument for K < 1 or n < 2.
double linear_distortion_bound(double k, int n);

struct DistortionReport
{
    bool hypothesis = false;  //!< |Df|^n <= K J
    double upper_slack = 0;   //!< H(K) l(Df) - |Df|
    std::vector<double> row_slack;  //!< |row i| - l(Df)
    bool upper_ok = false;
    bool rows_ok = false;

    //! Only meaningful when the hypothesis holds.
    bool passed() const { return !hypothesis || (upper_ok && rows_ok); }
};

//! Inequalities are judged with a relative tolerance of 1e-12 so that the
//! equality cases pass.
DistortionReport distortion_check(DifferentialSample const& sample, double k);
//! General n x n version, singular values by Jacobi SVD.
DistortionReport distortion_check(Eigen::MatrixXd const& df, double k);

}  // namespace hqclab::hqc
