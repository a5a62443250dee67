#include "hqclab/hqc/distortion.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "hqclab/core/error.hpp"
#include "hqclab/hqc/svd2.hpp"

namespace hqclab::hqc
{
namespace
{
constexpr double kRelTol = 1e-12;

DistortionReport check(double smax,
                       double smin,
                       double jac,
                       Eigen::MatrixXd const& df,
                       double k)
{
    int n = static_cast<int>(df.rows());
    DistortionReport r;
    double scale = std::max(smax, 1e-300);
    r.hypothesis = std::pow(smax, n) <= k * jac * (1 + kRelTol);
    double h = linear_distortion_bound(std::max(k, 1.0), n);
    r.upper_slack = h * smin - smax;
    r.upper_ok = r.upper_slack >= -kRelTol * scale;
    r.rows_ok = true;
    for (int i = 0; i < n; ++i)
    {
        double slack = df.row(i).norm() - smin;
        r.row_slack.push_back(slack);
        r.rows_ok = r.rows_ok && slack >= -kRelTol * scale;
    }
    return r;
}
}  // namespace

DifferentialSample make_sample(Vec2 const& x, Mat2 const& df)
{
    DifferentialSample s;
    s.x = x;
    s.df = df;
    auto sv = singular_values(df);
    s.sigma_max = sv.max;
    s.sigma_min = sv.min;
    s.jacobian = df.determinant();
    s.distortion = s.jacobian > 0 ? sv.max * sv.max / s.jacobian
                                  : std::numeric_limits<double>::infinity();
    return s;
}

double linear_distortion_bound(double k, int n)
{
    HQC_REQUIRE(k >= 1 && std::isfinite(k), ErrorKind::invalid_argument,
                "distortion constant K must be >= 1");
    HQC_REQUIRE(n >= 2, ErrorKind::invalid_argument, "dimension must be >= 2");
    return k;
}

DistortionReport distortion_check(DifferentialSample const& sample, double k)
{
    Eigen::MatrixXd df = sample.df;
    return check(sample.sigma_max, sample.sigma_min, sample.jacobian, df, k);
}

DistortionReport distortion_check(Eigen::MatrixXd const& df, double k)
{
    HQC_REQUIRE(df.rows() == df.cols() && df.rows() >= 2, ErrorKind::invalid_argument,
                "differential must be square with n >= 2");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(df);
    auto const& s = svd.singularValues();
    return check(s(0), s(s.size() - 1), df.determinant(), df, k);
}

}  // namespace hqclab::hqc
