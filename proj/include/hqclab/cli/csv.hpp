#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hqclab::cli
{
using Cell = std::variant<double, std::int64_t, std::string>;

//! Shortest text that round-trips the double ("%.17g"); nan and inf spelled
//! out.
std::string format_number(double x);

//---------------------------------------------------------------------------//
//! Rectangular table of pre-formatted cells with a header row.
class Table
{
  public:
    Table() = default;
    explicit Table(std::vector<std::string> columns);

    void add_row(std::vector<Cell> const& row);

    std::vector<std::string> const& columns() const { return columns_; }
    std::vector<std::vector<std::string>> const& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    //! Column index; throws InvalidArgument for an unknown name.
    std::size_t column(std::string_view name) const;
    //! Column parsed as numbers; throws NonPositiveData on non-numeric text.
    std::vector<double> numeric(std::string_view name) const;

    std::string to_csv() const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

//! Parse CSV text written by Table::to_csv (no quoting).
Table parse_csv(std::string_view text);

}  // namespace hqclab::cli
