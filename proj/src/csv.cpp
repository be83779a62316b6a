#include "fowthil/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "fowthil/errors.hpp"

namespace fowthil {

namespace {
bool header_matches(const std::string& header, const std::string& name) {
    if (header == name) return true;
    const auto paren = header.find(" (");
    return paren != std::string::npos && header.compare(0, paren, name) == 0 && paren == name.size();
}
}  // namespace

void Table::add(std::string header, std::vector<double> values) {
    if (!columns.empty() && values.size() != rows()) {
        throw InvalidArgument(fmt::format("column '{}' has {} rows, table has {}", header, values.size(), rows()));
    }
    headers.push_back(std::move(header));
    columns.push_back(std::move(values));
}

bool Table::has(const std::string& name) const {
    for (const auto& h : headers) {
        if (header_matches(h, name)) return true;
    }
    return false;
}

const std::vector<double>& Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < headers.size(); ++i) {
        if (header_matches(headers[i], name)) return columns[i];
    }
    throw InvalidArgument("no column named '" + name + "'");
}

void write_csv(const std::string& path, const Table& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (std::size_t c = 0; c < table.headers.size(); ++c) out << (c ? "," : "") << table.headers[c];
    out << '\n';
    std::string line;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        line.clear();
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) line += ',';
            fmt::format_to(std::back_inserter(line), "{}", table.columns[c][r]);
        }
        out << line << '\n';
    }
}

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InsufficientData("cannot open " + path);
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw InsufficientData(path + ": empty file");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (!cell.empty() && cell.back() == '\r') cell.pop_back();
            t.headers.push_back(cell);
        }
    }
    t.columns.resize(t.headers.size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        std::size_t start = 0;
        for (std::size_t c = 0; c < t.headers.size(); ++c) {
            const auto end = line.find(',', start);
            const std::string_view cell(line.data() + start,
                                        (end == std::string::npos ? line.size() : end) - start);
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
                throw InsufficientData(fmt::format("{}: row {}, column {}: not a number", path, row, t.headers[c]));
            }
            t.columns[c].push_back(v);
            if (end == std::string::npos) {
                if (c + 1 != t.headers.size()) throw InsufficientData(fmt::format("{}: row {} is short", path, row));
                break;
            }
            start = end + 1;
        }
    }
    return t;
}

}  // namespace fowthil
