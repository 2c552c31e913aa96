#include "sykgw/persist.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sykgw/errors.hpp"

namespace sykgw {

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw InvalidArgument("table has no column '" + name + "'");
}

const std::string& Table::at(std::size_t row, const std::string& name) const {
    if (row >= rows.size()) throw InvalidArgument("table row out of range");
    return rows[row][column(name)];
}

double Table::number(std::size_t row, const std::string& name) const {
    const std::string& cell = at(row, name);
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("cell '" + cell + "' in column '" + name + "' is not a number");
    }
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_number(long long v) { return std::to_string(v); }
std::string format_number(std::size_t v) { return std::to_string(v); }

namespace {

void check_cell(const std::string& cell) {
    if (cell.find_first_of("\t\n\r") != std::string::npos)
        throw InvalidArgument("table cell contains a tab or newline: '" + cell + "'");
}

void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        check_cell(cells[i]);
        if (i) os << '\t';
        os << cells[i];
    }
    os << '\n';
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find('\t', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

void write_table(const std::string& path, const Table& table) {
    for (const auto& row : table.rows)
        if (row.size() != table.columns.size())
            throw InvalidArgument("row width " + std::to_string(row.size()) + " does not match " +
                                  std::to_string(table.columns.size()) + " columns in " + path);
    std::ostringstream body;
    write_line(body, table.columns);
    for (const auto& row : table.rows) write_line(body, row);

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << body.str();
    os.flush();
    if (!os) throw std::runtime_error("write failed for " + path);
}

Table read_table(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path + " for reading");
    Table t;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error(path + " is empty");
    t.columns = split(line);
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != t.columns.size())
            throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(t.columns.size()) + " cells, found " +
                                  std::to_string(cells.size()));
        t.rows.push_back(std::move(cells));
    }
    if (is.bad()) throw std::runtime_error("read failed for " + path);
    return t;
}

}  // namespace sykgw
