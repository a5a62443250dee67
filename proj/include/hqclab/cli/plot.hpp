#pragma once

#include <span>
#include <string>

#include "hqclab/cli/csv.hpp"
#include "hqclab/core/fit.hpp"

namespace hqclab::cli
{
struct PlotOptions
{
    std::string title;
    std::string x_label = "x";
    std::string y_label = "y";
};

struct Plot
{
    std::string svg;
    ExponentFit fit;  //!< the overlaid power law
};

//! Log-log scatter with the least-squares power law drawn over it. The bytes
//! depend only on the input. Throws NonPositiveData below 8 points or on a
//! non-positive or non-finite coordinate.
Plot emit_plot(std::span<double const> x, std::span<double const> y, PlotOptions const& options);

//! Plot two named columns of a table.
Plot emit_plot(Table const& table,
               std::string const& x_column,
               std::string const& y_column,
               std::string title = {});

}  // namespace hqclab::cli
