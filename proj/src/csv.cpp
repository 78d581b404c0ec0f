#include "csv.hpp"

#include <cstdio>
#include <sstream>

namespace corr1d {

std::string format_double(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", x);
    return buffer;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()), out_(path, std::ios::binary) {
    if (!out_) throw Error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::write_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    write_row(cells);
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) {
        throw Error(path_ + ": row has " + std::to_string(cells.size()) + " cells, header has " +
                    std::to_string(columns_));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw Error("write failed: " + path_);
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

double CsvTable::number(std::size_t row, int col) const {
    if (col < 0 || row >= rows.size() || static_cast<std::size_t>(col) >= rows[row].size()) {
        throw Error("csv cell out of range");
    }
    return std::stod(rows[row][col]);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open csv: " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    if (first) throw Error("empty csv: " + path);
    return table;
}

}  // namespace corr1d
