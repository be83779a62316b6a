#pragma once

#include <string>
#include <vector>

namespace fowthil {

// Column-major numeric table with unit-bearing headers such as "t (s)".
struct Table {
    std::vector<std::string> headers;
    std::vector<std::vector<double>> columns;

    void add(std::string header, std::vector<double> values);
    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    // Matches the full header or the bare name before " (unit)".
    const std::vector<double>& column(const std::string& name) const;
    bool has(const std::string& name) const;
};

// Numbers are written in shortest round-trip form.
void write_csv(const std::string& path, const Table& table);
Table read_csv(const std::string& path);

}  // namespace fowthil
