#pragma once

// Result tables: tab-separated text, one header line of column names, one
// line per row. Floating-point cells carry 17 significant digits so a table
// read back reproduces the doubles exactly.

#include <string>
#include <vector>

namespace sykgw {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
    const std::string& at(std::size_t row, const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
    bool operator==(const Table&) const = default;
};

std::string format_number(double v);
std::string format_number(long long v);
std::string format_number(std::size_t v);

/// Incremental row builder: cells appended in column order.
class RowBuilder {
public:
    RowBuilder& add(const std::string& s) {
        cells_.push_back(s);
        return *this;
    }
    RowBuilder& add(const char* s) { return add(std::string(s)); }
    RowBuilder& add(double v) { return add(format_number(v)); }
    RowBuilder& add(int v) { return add(format_number(static_cast<long long>(v))); }
    RowBuilder& add(long long v) { return add(format_number(v)); }
    RowBuilder& add(std::size_t v) { return add(format_number(v)); }
    std::vector<std::string> done() { return std::move(cells_); }

private:
    std::vector<std::string> cells_;
};

/// Throws std::runtime_error naming the path on I/O failure and
/// InvalidArgument when a row does not match the header.
void write_table(const std::string& path, const Table& table);
Table read_table(const std::string& path);

}  // namespace sykgw
