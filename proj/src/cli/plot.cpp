#include "hqclab/cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hqclab/core/error.hpp"

namespace hqclab::cli
{
namespace
{
constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(std::string const& s)
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis
{
    double lo, hi;  // decades, log10
    double px_lo, px_hi;
    double map(double v) const
    {
        return px_lo + (std::log10(v) - lo) / (hi - lo) * (px_hi - px_lo);
    }
};

Axis make_axis(std::span<double const> v, double px_lo, double px_hi)
{
    auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    double lo = std::floor(std::log10(*mn));
    double hi = std::ceil(std::log10(*mx));
    if (hi <= lo)
        hi = lo + 1;
    return {lo, hi, px_lo, px_hi};
}
}  // namespace

Plot emit_plot(std::span<double const> x, std::span<double const> y, PlotOptions const& options)
{
    HQC_REQUIRE(x.size() == y.size(), ErrorKind::invalid_argument, "plot columns differ in length");
    HQC_REQUIRE(x.size() >= 8, ErrorKind::non_positive_data,
                "plot needs at least 8 rows, got " + std::to_string(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        HQC_REQUIRE(std::isfinite(x[i]) && std::isfinite(y[i]) && x[i] > 0 && y[i] > 0,
                    ErrorKind::non_positive_data,
                    "plot row " + std::to_string(i) + " is not positive and finite");
    }
    Plot plot;
    plot.fit = fit_power_law(x, y);

    Axis ax = make_axis(x, kLeft, kWidth - kRight);
    Axis ay = make_axis(y, kHeight - kBottom, kTop);

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\""
         + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight)
         + "\" fill=\"white\"/>\n";
    s += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
         + escape(options.title) + "</text>\n";

    // frame and decade grid
    s += "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
    for (double d = ax.lo; d <= ax.hi; d += 1)
    {
        double px = ax.map(std::pow(10.0, d));
        s += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(px) + "\" y2=\""
             + fmt(kHeight - kBottom) + "\"/>\n";
    }
    for (double d = ay.lo; d <= ay.hi; d += 1)
    {
        double py = ay.map(std::pow(10.0, d));
        s += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(py) + "\" x2=\""
             + fmt(kWidth - kRight) + "\" y2=\"" + fmt(py) + "\"/>\n";
    }
    s += "</g>\n";
    s += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\""
         + fmt(kWidth - kLeft - kRight) + "\" height=\"" + fmt(kHeight - kTop - kBottom)
         + "\" fill=\"none\" stroke=\"black\"/>\n";
    s += "<g font-size=\"12\">\n";
    for (double d = ax.lo; d <= ax.hi; d += 1)
    {
        s += "<text x=\"" + fmt(ax.map(std::pow(10.0, d))) + "\" y=\""
             + fmt(kHeight - kBottom + 18) + "\" text-anchor=\"middle\">1e"
             + std::to_string(static_cast<int>(d)) + "</text>\n";
    }
    for (double d = ay.lo; d <= ay.hi; d += 1)
    {
        s += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(ay.map(std::pow(10.0, d)) + 4)
             + "\" text-anchor=\"end\">1e" + std::to_string(static_cast<int>(d)) + "</text>\n";
    }
    s += "<text x=\"" + fmt((kLeft + kWidth - kRight) / 2) + "\" y=\"" + fmt(kHeight - 16)
         + "\" text-anchor=\"middle\">" + escape(options.x_label) + "</text>\n";
    s += "<text x=\"18\" y=\"" + fmt((kTop + kHeight - kBottom) / 2)
         + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
         + fmt((kTop + kHeight - kBottom) / 2) + ")\">" + escape(options.y_label) + "</text>\n";
    s += "</g>\n";

    // fitted power law over the data range
    auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
    char slope[64];
    std::snprintf(slope, sizeof(slope), "slope %.4f", plot.fit.exponent);
    s += "<polyline class=\"fit\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" "
         "data-slope=\""
         + format_number(plot.fit.exponent) + "\" points=\"";
    for (int k = 0; k <= 32; ++k)
    {
        double t = std::pow(10.0, std::log10(*xmin)
                                      + k / 32.0 * (std::log10(*xmax) - std::log10(*xmin)));
        if (k)
            s += ' ';
        s += fmt(ax.map(t)) + "," + fmt(ay.map(plot.fit(t)));
    }
    s += "\"/>\n";
    s += "<g fill=\"#1f77b4\">\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        s += "<circle cx=\"" + fmt(ax.map(x[i])) + "\" cy=\"" + fmt(ay.map(y[i])) + "\" r=\"3\"/>\n";
    s += "</g>\n";
    s += "<text x=\"" + fmt(kWidth - kRight - 8) + "\" y=\"" + fmt(kTop + 18)
         + "\" text-anchor=\"end\" font-size=\"12\" fill=\"#d62728\">" + slope + "</text>\n";
    s += "</svg>\n";
    plot.svg = std::move(s);
    return plot;
}

Plot emit_plot(Table const& table,
               std::string const& x_column,
               std::string const& y_column,
               std::string title)
{
    auto x = table.numeric(x_column);
    auto y = table.numeric(y_column);
    return emit_plot(x, y, {std::move(title), x_column, y_column});
}

}  // namespace hqclab::cli
