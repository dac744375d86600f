#include "bsglab/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bsg {

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

// Full-consume double parse; "nan"/"inf" handled by strtod.
bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size();
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

Cell parse_cell(const std::string& field) {
    double v;
    if (parse_double(field, v)) return v;
    return field;
}

std::string render_cell(const Cell& cell) {
    if (std::holds_alternative<double>(cell)) return format_double(std::get<double>(cell));
    const std::string& s = std::get<std::string>(cell);
    if (needs_quoting(s))
        throw std::invalid_argument("Table: string cells may not contain commas, quotes, or "
                                    "newlines: '" + s + "'");
    return s;
}

}  // namespace

Cell cell_bool(bool b) { return std::string(b ? "true" : "false"); }

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("Table: row has " + std::to_string(row.size()) +
                                    " cells, table has " + std::to_string(columns.size()) +
                                    " columns");
    rows.push_back(std::move(row));
}

int Table::column_index(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (columns[c] == name) return int(c);
    return -1;
}

double Table::number_at(std::size_t row, const std::string& column) const {
    int c = column_index(column);
    if (c < 0) throw std::invalid_argument("Table: no column '" + column + "'");
    const Cell& cell = rows.at(row).at(c);
    if (!std::holds_alternative<double>(cell))
        throw std::invalid_argument("Table: column '" + column + "' is not numeric at row " +
                                    std::to_string(row));
    return std::get<double>(cell);
}

std::string Table::text_at(std::size_t row, const std::string& column) const {
    int c = column_index(column);
    if (c < 0) throw std::invalid_argument("Table: no column '" + column + "'");
    const Cell& cell = rows.at(row).at(c);
    if (std::holds_alternative<double>(cell)) return format_double(std::get<double>(cell));
    return std::get<std::string>(cell);
}

std::string Table::to_csv() const {
    if (columns.empty()) throw std::invalid_argument("Table: cannot serialize without columns");
    std::ostringstream out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (needs_quoting(columns[c]))
            throw std::invalid_argument("Table: column name '" + columns[c] + "' not CSV-safe");
        out << (c ? "," : "") << columns[c];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << render_cell(row[c]);
        out << '\n';
    }
    return out.str();
}

Table Table::from_csv(const std::string& text) {
    Table table;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("Table: empty CSV (missing header)");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    table.columns = split_line(line);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != table.columns.size())
            throw std::invalid_argument("Table: CSV row with " + std::to_string(fields.size()) +
                                        " fields under a " + std::to_string(table.columns.size()) +
                                        "-column header");
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_cell(f));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void Table::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("Table: cannot open '" + path.string() + "' for writing");
    out << to_csv();
    if (!out) throw std::runtime_error("Table: write to '" + path.string() + "' failed");
}

Table Table::read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("Table: cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_csv(buf.str());
}

bool Table::same_as(const Table& other) const {
    if (columns != other.columns || rows.size() != other.rows.size()) return false;
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const Cell& a = rows[r][c];
            const Cell& b = other.rows[r][c];
            if (a.index() != b.index()) return false;
            if (std::holds_alternative<double>(a)) {
                double x = std::get<double>(a), y = std::get<double>(b);
                if (x != y && !(std::isnan(x) && std::isnan(y))) return false;
            } else if (std::get<std::string>(a) != std::get<std::string>(b)) {
                return false;
            }
        }
    return true;
}

}  // namespace bsg
