#include "hqclab/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hqclab/core/error.hpp"

namespace hqclab::cli
{
std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> const& row)
{
    HQC_REQUIRE(row.size() == columns_.size(), ErrorKind::invalid_argument,
                "row has " + std::to_string(row.size()) + " cells, table has "
                    + std::to_string(columns_.size()) + " columns");
    std::vector<std::string> out;
    out.reserve(row.size());
    for (auto const& cell : row)
    {
        if (auto const* d = std::get_if<double>(&cell))
            out.push_back(format_number(*d));
        else if (auto const* i = std::get_if<std::int64_t>(&cell))
            out.push_back(std::to_string(*i));
        else
            out.push_back(std::get<std::string>(cell));
    }
    rows_.push_back(std::move(out));
}

std::size_t Table::column(std::string_view name) const
{
    for (std::size_t i = 0; i < columns_.size(); ++i)
    {
        if (columns_[i] == name)
            return i;
    }
    throw Error(ErrorKind::invalid_argument, "no column '" + std::string(name) + "'");
}

std::vector<double> Table::numeric(std::string_view name) const
{
    std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (auto const& row : rows_)
    {
        auto const& s = row[c];
        double v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        HQC_REQUIRE(ec == std::errc{} && ptr == s.data() + s.size(),
                    ErrorKind::non_positive_data,
                    "column " + std::string(name) + ": '" + s + "' is not a number");
        out.push_back(v);
    }
    return out;
}

std::string Table::to_csv() const
{
    std::string out;
    auto line = [&out](std::vector<std::string> const& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            if (i)
                out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(columns_);
    for (auto const& row : rows_)
        line(row);
    return out;
}

Table parse_csv(std::string_view text)
{
    std::istringstream is{std::string(text)};
    std::string line;
    auto split = [](std::string const& l) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(l);
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        if (!l.empty() && l.back() == ',')
            cells.emplace_back();
        return cells;
    };
    Table table;
    bool header = true;
    while (std::getline(is, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto cells = split(line);
        if (header)
        {
            table = Table(std::move(cells));
            header = false;
            continue;
        }
        std::vector<Cell> row(cells.begin(), cells.end());
        table.add_row(row);
    }
    return table;
}

}  // namespace hqclab::cli
