#pragma once
// Column-named result tables with lossless CSV round-tripping: doubles are
// written with %.17g (shortest exact-reparse form for IEEE doubles), strings
// pass through verbatim. Cells that parse fully as doubles are doubles.
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace bsg {

using Cell = std::variant<double, std::string>;

Cell cell_bool(bool b);  // "true"/"false" string cells
std::string format_double(double v);  // %.17g

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);  // arity-checked
    int column_index(const std::string& name) const;  // -1 if absent
    bool has_column(const std::string& name) const { return column_index(name) >= 0; }
    double number_at(std::size_t row, const std::string& column) const;
    std::string text_at(std::size_t row, const std::string& column) const;

    std::string to_csv() const;
    static Table from_csv(const std::string& text);
    void write_csv(const std::filesystem::path& path) const;
    static Table read_csv(const std::filesystem::path& path);

    // NaN-tolerant equality (NaN cells compare equal to NaN cells).
    bool same_as(const Table& other) const;
};

}  // namespace bsg
