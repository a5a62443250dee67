#pragma once

#include <Eigen/Core>
#include <cmath>
#include <numbers>

namespace hqclab
{
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

//! Counterclockwise quarter turn.
inline Vec2 perp(Vec2 const& v)
{
    return {-v.y(), v.x()};
}

inline double cross(Vec2 const& a, Vec2 const& b)
{
    return a.x() * b.y() - a.y() * b.x();
}

//! Wrap an angle into (-pi, pi].
inline double wrap_angle(double a)
{
    a = std::remainder(a, two_pi);
    return a == -pi ? pi : a;
}

//! Value with a one-sigma Monte Carlo (or discretization) error bar.
struct Estimate
{
    double value = 0;
    double std_error = 0;
};

}  // namespace hqclab
