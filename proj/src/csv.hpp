#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace corr1d {

// Results are written as plain comma-separated text: header row, LF line
// endings, '.' decimal separator, numbers at 17 significant digits so that
// parse(write(x)) == x for every double.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void write_row(const std::vector<double>& values);
    // Mixed row for tables carrying a label column.
    void write_row(const std::vector<std::string>& cells);

private:
    std::string path_;
    std::size_t columns_;
    std::ofstream out_;
};

std::string format_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 if absent
    double number(std::size_t row, int col) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace corr1d
