#pragma once

#include "hqclab/core/types.hpp"

namespace hqclab::hqc
{
struct SingularValues
{
    double max = 0;
    double min = 0;
};

//! Closed-form singular values of a 2x2 matrix.
SingularValues singular_values(Mat2 const& a);

}  // namespace hqclab::hqc
